//! Listing records, the facet schema, and the line-delimited corpus file.
//!
//! The first line of a corpus file is the schema record:
//!
//! ```text
//! {"schema": {"property_type": [...], "transaction_type": [...], "location_state": [...]}}
//! ```
//!
//! Every following non-empty line is one listing object with the keys
//! `id, title, description, location_state, location_locality,
//! location_street, property_type, transaction_type, price`. `price` may be
//! `null` or absent; everything else is a required string.

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::{BufRead, Write};
use thiserror::Error;

pub const PROPERTY_TYPE: &str = "property_type";
pub const TRANSACTION_TYPE: &str = "transaction_type";
pub const LOCATION_STATE: &str = "location_state";

/// Facet names every schema carries, in canonical order.
pub const FACET_NAMES: [&str; 3] = [PROPERTY_TYPE, TRANSACTION_TYPE, LOCATION_STATE];

const LISTING_KEYS: [&str; 9] = [
    "id",
    "title",
    "description",
    "location_state",
    "location_locality",
    "location_street",
    "property_type",
    "transaction_type",
    "price",
];

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("cannot read corpus: {0}")]
    Io(String),
    #[error("line {line}: malformed record: {reason}")]
    MalformedRecord { line: usize, reason: String },
    #[error("line {line}: duplicate id {id:?}")]
    DuplicateId { id: String, line: usize },
    #[error("line {line}: unknown value {value:?} for facet {facet}")]
    UnknownFacetValue {
        facet: String,
        value: String,
        line: usize,
    },
    #[error("line {line}: missing field {field}")]
    MissingField { field: String, line: usize },
    #[error("unknown field {0:?}")]
    UnknownField(String),
}

impl CorpusError {
    /// 1-based line the error refers to, when it has one.
    pub fn line(&self) -> Option<usize> {
        match self {
            CorpusError::MalformedRecord { line, .. }
            | CorpusError::DuplicateId { line, .. }
            | CorpusError::UnknownFacetValue { line, .. }
            | CorpusError::MissingField { line, .. } => Some(*line),
            CorpusError::Io(_) | CorpusError::UnknownField(_) => None,
        }
    }

    fn malformed(line: usize, reason: impl Into<String>) -> Self {
        CorpusError::MalformedRecord {
            line,
            reason: reason.into(),
        }
    }
}

/// Allowed values for each of the fixed facets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetSchema {
    // Indexed like FACET_NAMES.
    values: [Vec<String>; 3],
}

impl FacetSchema {
    /// Fails if any value list is empty or has duplicates.
    pub fn new(
        property_type: Vec<String>,
        transaction_type: Vec<String>,
        location_state: Vec<String>,
    ) -> Result<Self, String> {
        let values = [property_type, transaction_type, location_state];
        for (name, list) in FACET_NAMES.iter().zip(&values) {
            if list.is_empty() {
                return Err(format!("facet {name} has no values"));
            }
            let mut seen = HashSet::new();
            if let Some(dup) = list.iter().find(|v| !seen.insert(v.as_str())) {
                return Err(format!("facet {name} lists {dup:?} twice"));
            }
        }
        Ok(FacetSchema { values })
    }

    pub fn facet_names(&self) -> impl Iterator<Item = &'static str> {
        FACET_NAMES.iter().copied()
    }

    pub fn values(&self, facet: &str) -> Option<&[String]> {
        let i = FACET_NAMES.iter().position(|&n| n == facet)?;
        Some(&self.values[i])
    }

    pub fn allows(&self, facet: &str, value: &str) -> bool {
        self.values(facet)
            .is_some_and(|vs| vs.iter().any(|v| v == value))
    }

    /// `(facet, values)` pairs in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&'static str, &[String])> {
        FACET_NAMES
            .iter()
            .copied()
            .zip(self.values.iter().map(Vec::as_slice))
    }
}

impl Serialize for FacetSchema {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(FACET_NAMES.len()))?;
        for (name, values) in self.iter() {
            map.serialize_entry(name, values)?;
        }
        map.end()
    }
}

/// One property advertisement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Listing {
    pub id: String,
    pub title: String,
    pub description: String,
    pub location_state: String,
    pub location_locality: String,
    pub location_street: String,
    pub property_type: String,
    pub transaction_type: String,
    pub price: Option<u64>,
}

impl Listing {
    /// The listing's value for a schema facet.
    pub fn facet_value(&self, facet: &str) -> Option<&str> {
        match facet {
            PROPERTY_TYPE => Some(&self.property_type),
            TRANSACTION_TYPE => Some(&self.transaction_type),
            LOCATION_STATE => Some(&self.location_state),
            _ => None,
        }
    }

    pub fn text(&self, field: SearchField) -> &str {
        match field {
            SearchField::LocationStreet => &self.location_street,
            SearchField::LocationLocality => &self.location_locality,
            SearchField::LocationState => &self.location_state,
            SearchField::Title => &self.title,
            SearchField::Description => &self.description,
        }
    }
}

/// Text fields a pattern can run over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SearchField {
    LocationStreet,
    LocationLocality,
    LocationState,
    Title,
    Description,
}

impl SearchField {
    /// Default search order: location fields first.
    pub const ALL: [SearchField; 5] = [
        SearchField::LocationStreet,
        SearchField::LocationLocality,
        SearchField::LocationState,
        SearchField::Title,
        SearchField::Description,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SearchField::LocationStreet => "location_street",
            SearchField::LocationLocality => "location_locality",
            SearchField::LocationState => "location_state",
            SearchField::Title => "title",
            SearchField::Description => "description",
        }
    }

    pub fn from_name(name: &str) -> Result<Self, CorpusError> {
        SearchField::ALL
            .into_iter()
            .find(|f| f.name() == name)
            .ok_or_else(|| CorpusError::UnknownField(name.to_string()))
    }
}

impl fmt::Display for SearchField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for SearchField {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

/// Text of a searchable field, looked up by name.
pub fn field_text<'a>(listing: &'a Listing, field: &str) -> Result<&'a str, CorpusError> {
    SearchField::from_name(field).map(|f| listing.text(f))
}

/// A validated, immutable listing collection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Corpus {
    schema: FacetSchema,
    listings: Vec<Listing>,
    by_id: HashMap<String, usize>,
}

impl Corpus {
    /// Validates `listings` against `schema`. Line numbers in errors are
    /// file lines, assuming one listing per line after the schema.
    pub fn new(schema: FacetSchema, listings: Vec<Listing>) -> Result<Self, CorpusError> {
        let mut by_id = HashMap::with_capacity(listings.len());
        for (i, listing) in listings.iter().enumerate() {
            let line = i + 2;
            check_listing(&schema, listing, line)?;
            if by_id.insert(listing.id.clone(), i).is_some() {
                return Err(CorpusError::DuplicateId {
                    id: listing.id.clone(),
                    line,
                });
            }
        }
        Ok(Corpus {
            schema,
            listings,
            by_id,
        })
    }

    pub fn schema(&self) -> &FacetSchema {
        &self.schema
    }

    pub fn listings(&self) -> &[Listing] {
        &self.listings
    }

    pub fn len(&self) -> usize {
        self.listings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.listings.is_empty()
    }

    pub fn get_listing(&self, id: &str) -> Option<&Listing> {
        self.position(id).map(|i| &self.listings[i])
    }

    /// Corpus order index of `id`.
    pub fn position(&self, id: &str) -> Option<usize> {
        self.by_id.get(id).copied()
    }

    /// Writes the corpus in file format; [`load_corpus`] reads it back
    /// unchanged.
    pub fn write_to<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let header = serde_json::json!({ "schema": &self.schema });
        writeln!(out, "{header}")?;
        for listing in &self.listings {
            serde_json::to_writer(&mut out, listing)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

/// Free-function form of [`Corpus::get_listing`].
pub fn get_listing<'a>(corpus: &'a Corpus, id: &str) -> Option<&'a Listing> {
    corpus.get_listing(id)
}

/// Loads a corpus, stopping at the first problem.
pub fn load_corpus<R: BufRead>(source: R) -> Result<Corpus, CorpusError> {
    validate_corpus(source).map_err(|mut errors| errors.swap_remove(0))
}

/// Loads a corpus, collecting every problem found instead of stopping at
/// the first. The error list is never empty and is ordered by line.
pub fn validate_corpus<R: BufRead>(mut source: R) -> Result<Corpus, Vec<CorpusError>> {
    let mut lines = Vec::new();
    let mut buf = Vec::new();
    loop {
        buf.clear();
        match source.read_until(b'\n', &mut buf) {
            Ok(0) => break,
            Ok(_) => {
                let line_no = lines.len() + 1;
                while matches!(buf.last(), Some(b'\n' | b'\r')) {
                    buf.pop();
                }
                lines.push(
                    String::from_utf8(buf.clone())
                        .map_err(|_| CorpusError::malformed(line_no, "invalid UTF-8")),
                );
            }
            Err(e) => return Err(vec![CorpusError::Io(e.to_string())]),
        }
    }

    let schema = match lines.first() {
        None => return Err(vec![CorpusError::malformed(1, "missing schema line")]),
        Some(Err(e)) => return Err(vec![e.clone()]),
        Some(Ok(text)) => parse_schema(text).map_err(|e| vec![e])?,
    };

    let mut errors = Vec::new();
    let mut listings = Vec::new();
    let mut first_seen: HashMap<String, usize> = HashMap::new();
    for (i, line) in lines.iter().enumerate().skip(1) {
        let line_no = i + 1;
        let text = match line {
            Ok(text) => text,
            Err(e) => {
                errors.push(e.clone());
                continue;
            }
        };
        if text.trim().is_empty() {
            continue;
        }
        let listing = match parse_listing(text, line_no)
            .and_then(|l| check_listing(&schema, &l, line_no).map(|()| l))
        {
            Ok(l) => l,
            Err(e) => {
                errors.push(e);
                continue;
            }
        };
        if first_seen.insert(listing.id.clone(), line_no).is_some() {
            errors.push(CorpusError::DuplicateId {
                id: listing.id,
                line: line_no,
            });
            continue;
        }
        listings.push(listing);
    }

    if !errors.is_empty() {
        return Err(errors);
    }
    let by_id = listings
        .iter()
        .enumerate()
        .map(|(i, l)| (l.id.clone(), i))
        .collect();
    Ok(Corpus {
        schema,
        listings,
        by_id,
    })
}

fn parse_schema(text: &str) -> Result<FacetSchema, CorpusError> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| CorpusError::malformed(1, e.to_string()))?;
    let outer = value
        .as_object()
        .ok_or_else(|| CorpusError::malformed(1, "schema line is not an object"))?;
    if outer.len() != 1 {
        return Err(CorpusError::malformed(1, "schema line must hold only \"schema\""));
    }
    let facets = outer
        .get("schema")
        .ok_or_else(|| CorpusError::MissingField {
            field: "schema".into(),
            line: 1,
        })?
        .as_object()
        .ok_or_else(|| CorpusError::malformed(1, "\"schema\" is not an object"))?;
    if let Some(extra) = facets.keys().find(|k| !FACET_NAMES.contains(&k.as_str())) {
        return Err(CorpusError::malformed(1, format!("unknown facet {extra:?}")));
    }
    let mut lists = FACET_NAMES.iter().map(|&name| {
        let list = facets.get(name).ok_or_else(|| CorpusError::MissingField {
            field: name.into(),
            line: 1,
        })?;
        let list = list
            .as_array()
            .ok_or_else(|| CorpusError::malformed(1, format!("facet {name} is not a list")))?;
        list.iter()
            .map(|v| {
                v.as_str().map(str::to_owned).ok_or_else(|| {
                    CorpusError::malformed(1, format!("facet {name} has a non-string value"))
                })
            })
            .collect::<Result<Vec<_>, _>>()
    });
    let (p, t, s) = (
        lists.next().unwrap()?,
        lists.next().unwrap()?,
        lists.next().unwrap()?,
    );
    FacetSchema::new(p, t, s).map_err(|reason| CorpusError::malformed(1, reason))
}

fn parse_listing(text: &str, line: usize) -> Result<Listing, CorpusError> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| CorpusError::malformed(line, e.to_string()))?;
    let Value::Object(obj) = value else {
        return Err(CorpusError::malformed(line, "record is not an object"));
    };
    if let Some(extra) = obj.keys().find(|k| !LISTING_KEYS.contains(&k.as_str())) {
        return Err(CorpusError::malformed(line, format!("unexpected key {extra:?}")));
    }

    let text_field = |name: &str| -> Result<String, CorpusError> {
        match obj.get(name) {
            None | Some(Value::Null) => Err(CorpusError::MissingField {
                field: name.into(),
                line,
            }),
            Some(Value::String(s)) => Ok(s.clone()),
            Some(_) => Err(CorpusError::malformed(line, format!("{name} is not a string"))),
        }
    };
    let price = match obj.get("price") {
        None | Some(Value::Null) => None,
        Some(v) => Some(v.as_u64().ok_or_else(|| {
            CorpusError::malformed(line, "price is not a non-negative integer")
        })?),
    };
    Ok(Listing {
        id: text_field("id")?,
        title: text_field("title")?,
        description: text_field("description")?,
        location_state: text_field("location_state")?,
        location_locality: text_field("location_locality")?,
        location_street: text_field("location_street")?,
        property_type: text_field("property_type")?,
        transaction_type: text_field("transaction_type")?,
        price,
    })
}

fn check_listing(schema: &FacetSchema, listing: &Listing, line: usize) -> Result<(), CorpusError> {
    for (field, value) in [("id", &listing.id), ("title", &listing.title)] {
        if value.is_empty() {
            return Err(CorpusError::MissingField {
                field: field.into(),
                line,
            });
        }
    }
    for facet in FACET_NAMES {
        let value = listing.facet_value(facet).unwrap();
        if !schema.allows(facet, value) {
            return Err(CorpusError::UnknownFacetValue {
                facet: facet.into(),
                value: value.into(),
                line,
            });
        }
    }
    Ok(())
}
