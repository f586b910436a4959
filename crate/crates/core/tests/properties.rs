use std::collections::BTreeMap;

use proptest::prelude::*;
use prohecke::linalg::{ExactMatrix, Field, Presentation};
use prohecke::weyl::ExtendedWeylElt;

proptest! {
    #[test]
    fn presentation_matches_dense_rank(rows in prop::collection::vec(prop::collection::vec(0i64..5, 6), 0..8)) {
        let f = Field::Prime(5);
        let mut p = Presentation::new(&f, 6);
        for r in &rows {
            let sparse: BTreeMap<usize, _> =
                r.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, &x)| (i, f.from_i64(x))).collect();
            p.add(sparse);
        }
        let rank = if rows.is_empty() { 0 } else { ExactMatrix::from_i64(&f, &rows).rank() };
        prop_assert_eq!(p.finish().dim(), 6 - rank);
    }

    #[test]
    fn reduced_words_have_length_many_letters(word in prop::collection::vec(0usize..3, 0..7)) {
        let w = ExtendedWeylElt::from_word(3, 2, &word);
        let (omega, reduced) = w.reduced_word();
        prop_assert_eq!(reduced.len(), w.length());
        prop_assert!(reduced.len() <= word.len());
        prop_assert_eq!(omega.mul(&ExtendedWeylElt::from_word(3, 2, &reduced)), w);
    }
}
