//! Facet posting lists and boundary resolution.

use crate::corpus::{Corpus, FacetSchema};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BoundaryError {
    #[error("unknown facet {0:?}")]
    UnknownFacet(String),
    #[error("unknown value {value:?} for facet {facet}")]
    UnknownValue { facet: String, value: String },
}

/// Required value per facet; facets not present are unconstrained.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct FacetSelection(BTreeMap<String, String>);

impl FacetSelection {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets the value for `facet`, replacing any earlier one.
    pub fn with(mut self, facet: impl Into<String>, value: impl Into<String>) -> Self {
        self.insert(facet, value);
        self
    }

    pub fn insert(&mut self, facet: impl Into<String>, value: impl Into<String>) -> Option<String> {
        self.0.insert(facet.into(), value.into())
    }

    pub fn get(&self, facet: &str) -> Option<&str> {
        self.0.get(facet).map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn validate(&self, schema: &FacetSchema) -> Result<(), BoundaryError> {
        for (facet, value) in self.iter() {
            let allowed = schema
                .values(facet)
                .ok_or_else(|| BoundaryError::UnknownFacet(facet.to_string()))?;
            if !allowed.iter().any(|v| v == value) {
                return Err(BoundaryError::UnknownValue {
                    facet: facet.to_string(),
                    value: value.to_string(),
                });
            }
        }
        Ok(())
    }
}

impl<K: Into<String>, V: Into<String>> FromIterator<(K, V)> for FacetSelection {
    fn from_iter<I: IntoIterator<Item = (K, V)>>(iter: I) -> Self {
        FacetSelection(iter.into_iter().map(|(k, v)| (k.into(), v.into())).collect())
    }
}

/// Strictly ascending corpus positions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PostingList(Vec<usize>);

impl PostingList {
    pub fn positions(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, position: usize) -> bool {
        self.0.binary_search(&position).is_ok()
    }

    /// Listing ids, in corpus order.
    pub fn ids<'a>(&'a self, index: &'a BoundaryIndex) -> impl Iterator<Item = &'a str> + 'a {
        self.0.iter().map(|&p| index.ids[p].as_str())
    }

    /// Linear merge of two sorted lists.
    pub fn intersect(&self, other: &PostingList) -> PostingList {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len().min(b.len()));
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        PostingList(out)
    }
}

/// `(facet, value)` → posting list, for every value in the schema.
#[derive(Clone, Debug)]
pub struct BoundaryIndex {
    schema: FacetSchema,
    ids: Vec<String>,
    postings: HashMap<(String, String), PostingList>,
}

impl BoundaryIndex {
    pub fn schema(&self) -> &FacetSchema {
        &self.schema
    }

    /// Every listing id in corpus order.
    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn posting(&self, facet: &str, value: &str) -> Option<&PostingList> {
        self.postings.get(&(facet.to_string(), value.to_string()))
    }

    pub fn all(&self) -> PostingList {
        PostingList((0..self.ids.len()).collect())
    }
}

pub fn build_index(corpus: &Corpus) -> BoundaryIndex {
    let schema = corpus.schema().clone();
    let mut postings = HashMap::new();
    for (facet, values) in schema.iter() {
        let mut lists: HashMap<&str, Vec<usize>> =
            values.iter().map(|v| (v.as_str(), Vec::new())).collect();
        for (pos, listing) in corpus.listings().iter().enumerate() {
            let value = listing.facet_value(facet).expect("schema facet");
            // Corpus validation guarantees the value is in the schema.
            lists.get_mut(value).expect("validated value").push(pos);
        }
        for (value, list) in lists {
            postings.insert((facet.to_string(), value.to_string()), PostingList(list));
        }
    }
    BoundaryIndex {
        schema,
        ids: corpus.listings().iter().map(|l| l.id.clone()).collect(),
        postings,
    }
}

/// Intersects the posting lists of every selected `(facet, value)`. An
/// empty selection yields every listing.
pub fn apply_boundaries(
    index: &BoundaryIndex,
    selection: &FacetSelection,
) -> Result<PostingList, BoundaryError> {
    selection.validate(&index.schema)?;
    let mut lists: Vec<&PostingList> = selection
        .iter()
        .map(|(f, v)| index.posting(f, v).expect("validated selection"))
        .collect();
    // Smallest first keeps intermediate results short.
    lists.sort_by_key(|l| l.len());
    let mut iter = lists.into_iter();
    let Some(first) = iter.next() else {
        return Ok(index.all());
    };
    Ok(iter.fold(first.clone(), |acc, l| acc.intersect(l)))
}
