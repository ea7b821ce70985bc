mod common;

use boundsearch::corpus::{field_text, get_listing, load_corpus, CorpusError};
use common::{fixture, fixture_path, random_corpus};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

#[test]
fn fixture_shape() {
    let corpus = fixture();
    assert_eq!(corpus.len(), 20);
    let ifite = corpus
        .listings()
        .iter()
        .filter(|l| l.location_locality.contains("Ifite"))
        .count();
    assert_eq!(ifite, 6);
    assert_eq!(
        corpus.schema().values("property_type").unwrap(),
        ["Student Hostel", "Flat", "Duplex"]
    );
}

#[test]
fn fixture_fields() {
    let corpus = fixture();
    let l3 = get_listing(&corpus, "L-003").unwrap();
    assert_eq!(field_text(l3, "location_locality").unwrap(), "Ifite Awka");
    assert_eq!(field_text(l3, "price"), Err(CorpusError::UnknownField("price".into())));
    assert!(get_listing(&corpus, "L-999").is_none());
}

#[test]
fn every_file_id_is_retrievable() {
    let corpus = fixture();
    let text = std::fs::read_to_string(fixture_path()).unwrap();
    for line in text.lines().skip(1).filter(|l| !l.trim().is_empty()) {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        let id = v["id"].as_str().unwrap();
        assert_eq!(corpus.get_listing(id).unwrap().id, id);
    }
}

#[test]
fn loading_is_deterministic() {
    let bytes = std::fs::read(fixture_path()).unwrap();
    assert_eq!(
        load_corpus(bytes.as_slice()).unwrap(),
        load_corpus(bytes.as_slice()).unwrap()
    );
}

#[test]
fn fixture_round_trips() {
    let corpus = fixture();
    let mut out = Vec::new();
    corpus.write_to(&mut out).unwrap();
    assert_eq!(load_corpus(out.as_slice()).unwrap(), corpus);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_corpora_round_trip(seed in any::<u64>()) {
        let corpus = random_corpus(&mut StdRng::seed_from_u64(seed), 40, 8);
        let mut out = Vec::new();
        corpus.write_to(&mut out).unwrap();
        let reloaded = load_corpus(out.as_slice()).unwrap();
        prop_assert_eq!(&reloaded, &corpus);
        let mut again = Vec::new();
        reloaded.write_to(&mut again).unwrap();
        prop_assert_eq!(out, again);
    }
}
