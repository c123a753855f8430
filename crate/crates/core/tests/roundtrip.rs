//! Document round-trip: every generated valid condition survives
//! encode -> decode -> encode bit-identically.

use finbase::doc::ConditionDoc;
use finbase::verifier::{gen_condition, GenParams};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #[test]
    fn condition_documents_round_trip(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cond = gen_condition(&GenParams::default(), &mut rng);
        let doc = ConditionDoc::from(&cond);
        let text = serde_json::to_string(&doc).unwrap();
        let back: ConditionDoc = serde_json::from_str(&text).unwrap();
        let decoded = back.to_condition().unwrap();
        prop_assert_eq!(&decoded, &cond);
        prop_assert_eq!(serde_json::to_string(&ConditionDoc::from(&decoded)).unwrap(), text);
    }
}
