//! Alignment accuracy and Precision@q. Seed anchors are supervision, so they
//! are excluded from every score.

use std::collections::HashSet;

use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::error::{AlignError, Result};
use crate::graph::Mapping;
use crate::similarity::SimilarityMatrix;

fn evaluated_pairs<'a>(
    ground_truth: &'a [(usize, usize)],
    seeds: &'a [(usize, usize)],
) -> Result<Vec<(usize, usize)>> {
    if ground_truth.is_empty() {
        return Err(AlignError::UndefinedMetric("empty ground truth".into()));
    }
    let seeds: HashSet<_> = seeds.iter().collect();
    let pairs: Vec<_> = ground_truth
        .iter()
        .filter(|p| !seeds.contains(p))
        .copied()
        .collect();
    if pairs.is_empty() {
        return Err(AlignError::UndefinedMetric(
            "every ground-truth pair is a seed anchor".into(),
        ));
    }
    Ok(pairs)
}

/// Fraction of non-seed ground-truth pairs present in `mapping`.
pub fn accuracy(mapping: &Mapping, ground_truth: &[(usize, usize)], seeds: &[(usize, usize)]) -> Result<f64> {
    let pairs = evaluated_pairs(ground_truth, seeds)?;
    let hits = pairs.iter().filter(|&&(u, v)| mapping.contains(u, v)).count();
    Ok(hits as f64 / pairs.len() as f64)
}

/// Fraction of non-seed ground-truth pairs `(u, v)` with `v` among the `q`
/// highest entries of row `u`; ties rank the smaller column first.
pub fn precision_at_q(
    s: &SimilarityMatrix,
    ground_truth: &[(usize, usize)],
    seeds: &[(usize, usize)],
    q: usize,
) -> Result<f64> {
    let (_, n_t) = s.shape();
    if q == 0 || q > n_t {
        return Err(AlignError::Config(format!("q must be in 1..={n_t}, got {q}")));
    }
    let pairs = evaluated_pairs(ground_truth, seeds)?;
    let hits = pairs
        .iter()
        .filter(|&&(u, v)| {
            let row = s.values.row(u);
            let target = row[v];
            let ahead = row
                .iter()
                .enumerate()
                .filter(|&(w, &x)| x > target || (x == target && w < v))
                .count();
            ahead < q
        })
        .count();
    Ok(hits as f64 / pairs.len() as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub accuracy: f64,
    /// `(q, Precision@q)` in increasing `q`.
    pub precision_at: Vec<(usize, f64)>,
    pub matched_count: usize,
}

impl EvalReport {
    pub fn compute(
        mapping: &Mapping,
        similarity: Option<&SimilarityMatrix>,
        ground_truth: &[(usize, usize)],
        seeds: &[(usize, usize)],
        qs: &[usize],
    ) -> Result<Self> {
        let accuracy = accuracy(mapping, ground_truth, seeds)?;
        let mut qs = qs.to_vec();
        qs.sort_unstable();
        qs.dedup();
        let precision_at = match similarity {
            Some(s) => qs
                .iter()
                .map(|&q| Ok((q, precision_at_q(s, ground_truth, seeds, q)?)))
                .collect::<Result<_>>()?,
            None => Vec::new(),
        };
        Ok(EvalReport {
            accuracy,
            precision_at,
            matched_count: mapping.len(),
        })
    }

    pub fn precision(&self, q: usize) -> Option<f64> {
        self.precision_at.iter().find(|(k, _)| *k == q).map(|&(_, p)| p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

impl Serialize for EvalReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.precision_at.len() + 2))?;
        map.serialize_entry("accuracy", &self.accuracy)?;
        for (q, p) in &self.precision_at {
            map.serialize_entry(&format!("precision@{q}"), p)?;
        }
        map.serialize_entry("matched_count", &self.matched_count)?;
        map.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;

    fn identity(n: usize) -> Vec<(usize, usize)> {
        (0..n).map(|i| (i, i)).collect()
    }

    #[test]
    fn accuracy_cases() {
        let gt = identity(4);
        let exact = Mapping::from_pairs(gt.clone()).unwrap();
        assert_eq!(accuracy(&exact, &gt, &[]).unwrap(), 1.0);
        let shifted = Mapping::from_pairs((0..4).map(|i| (i, (i + 1) % 4))).unwrap();
        assert_eq!(accuracy(&shifted, &gt, &[]).unwrap(), 0.0);
        assert!(accuracy(&exact, &[], &[]).is_err());
    }

    #[test]
    fn seeds_are_excluded() {
        let gt = identity(5);
        // seed (4, 4) is dropped; 3 of the 4 remaining pairs are right
        let m = Mapping::from_pairs([(0, 0), (1, 1), (2, 2), (3, 4), (4, 3)]).unwrap();
        assert_eq!(accuracy(&m, &gt, &[(4, 4)]).unwrap(), 0.75);
        assert!(accuracy(&m, &gt, &gt).is_err());
    }

    fn hand_matrix() -> SimilarityMatrix {
        SimilarityMatrix::new(
            Array2::from_shape_vec(
                (3, 3),
                vec![
                    0.9, 0.5, 0.1, //
                    0.7, 0.2, 0.7, //
                    0.3, 0.3, 0.3,
                ],
            )
            .unwrap(),
        )
    }

    #[test]
    fn precision_by_hand_ranking() {
        let s = hand_matrix();
        let gt = identity(3);
        // ranks of the true column: row 0 -> 1st, row 1 -> 3rd, row 2 -> 3rd (ties to smaller ids)
        assert!((precision_at_q(&s, &gt, &[], 1).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((precision_at_q(&s, &gt, &[], 2).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(precision_at_q(&s, &gt, &[], 3).unwrap(), 1.0);
    }

    #[test]
    fn precision_argmax_and_bounds() {
        let s = SimilarityMatrix::new(Array2::eye(4));
        assert_eq!(precision_at_q(&s, &identity(4), &[], 1).unwrap(), 1.0);
        assert!(precision_at_q(&s, &identity(4), &[], 5).is_err());
        assert!(precision_at_q(&s, &identity(4), &[], 0).is_err());
    }

    #[test]
    fn report_json_layout() {
        let gt = identity(3);
        let m = Mapping::from_pairs(gt.clone()).unwrap();
        let r = EvalReport::compute(&m, Some(&hand_matrix()), &gt, &[], &[3, 1]).unwrap();
        assert_eq!(
            r.to_json(),
            r#"{"accuracy":1.0,"precision@1":0.3333333333333333,"precision@3":1.0,"matched_count":3}"#
        );
    }
}
