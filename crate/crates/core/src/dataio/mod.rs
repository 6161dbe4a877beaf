//! Readers, sample/table conversion and the built-in datasets.

mod fixtures;
mod text;

pub use fixtures::{Fixture, FixturePayload};
pub use text::{format_table, parse_joint, parse_pairs, parse_table};

use crate::estimators::{dense_ranks, ContingencyTable, PairedSample};

/// The sample holding `n_ij` copies of `(row_score_i, col_score_j)`, in
/// row-major order.
pub fn expand_table(table: &ContingencyTable) -> crate::Result<PairedSample> {
    let mut xs = Vec::with_capacity(table.total() as usize);
    let mut ys = Vec::with_capacity(table.total() as usize);
    for i in 0..table.rows() {
        for j in 0..table.cols() {
            for _ in 0..table.count(i, j) {
                xs.push(table.row_scores()[i]);
                ys.push(table.col_scores()[j]);
            }
        }
    }
    PairedSample::new(xs, ys)
}

/// Counts of co-occurring values, with the distinct sorted values as scores.
pub fn tabulate_sample(sample: &PairedSample) -> ContingencyTable {
    let (rx, dx) = dense_ranks(sample.xs());
    let (ry, dy) = dense_ranks(sample.ys());
    let mut counts = vec![vec![0u64; dy.len()]; dx.len()];
    for (&i, &j) in rx.iter().zip(&ry) {
        counts[i][j] += 1;
    }
    ContingencyTable::new(counts, Some(dx), Some(dy))
        .expect("distinct sorted values are valid scores")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        let t = ContingencyTable::new(vec![vec![1, 0], vec![0, 1]], None, None).unwrap();
        let s = expand_table(&t).unwrap();
        assert_eq!(s.pairs().collect::<Vec<_>>(), vec![(1.0, 1.0), (2.0, 2.0)]);
        assert_eq!(tabulate_sample(&s), t);

        let s = PairedSample::new(vec![3.0, 1.0, 3.0, 2.0], vec![0.5; 4]).unwrap();
        let t = tabulate_sample(&s);
        assert_eq!((t.rows(), t.cols()), (3, 1));
        let mut back: Vec<_> = expand_table(&t).unwrap().pairs().collect();
        let mut orig: Vec<_> = s.pairs().collect();
        back.sort_by(|a, b| a.partial_cmp(b).unwrap());
        orig.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(back, orig);
    }

    #[test]
    fn empty_table_does_not_expand() {
        let t = ContingencyTable::new(vec![vec![0, 0]], None, None).unwrap();
        assert!(expand_table(&t).is_err());
    }
}
