mod common;

use proptest::prelude::*;
use simvec_core::eval::{match_elements, pair_cost, EvalOptions};
use simvec_core::{ElementKind, SimVecDoc};

/// Minimum total over every injective pairing of the smaller side.
fn brute(cost: &[Vec<f64>]) -> f64 {
    fn go(cost: &[Vec<f64>], row: usize, used: &mut Vec<bool>, rows_left_to_skip: usize) -> f64 {
        if row == cost.len() {
            return 0.0;
        }
        let mut best = f64::INFINITY;
        if rows_left_to_skip > 0 {
            best = go(cost, row + 1, used, rows_left_to_skip - 1);
        }
        for j in 0..used.len() {
            if !used[j] {
                used[j] = true;
                best = best.min(cost[row][j] + go(cost, row + 1, used, rows_left_to_skip));
                used[j] = false;
            }
        }
        best
    }
    let rows = cost.len();
    let cols = cost.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return 0.0;
    }
    go(cost, 0, &mut vec![false; cols], rows.saturating_sub(cols))
}

fn check(pred: &SimVecDoc, gt: &SimVecDoc) -> Result<(), TestCaseError> {
    let opts = EvalOptions::default();
    let a = match_elements(pred, gt);
    for kind in ElementKind::ALL {
        let p = pred.indices_of(kind);
        let g = gt.indices_of(kind);
        let cost: Vec<Vec<f64>> =
            p.iter().map(|&i| g.iter().map(|&j| pair_cost(&pred.elements[i], &gt.elements[j], &opts)).collect()).collect();
        let k = a.kind(kind);
        prop_assert_eq!(k.pairs.len(), p.len().min(g.len()));
        prop_assert_eq!(k.unmatched_pred.len() + k.pairs.len(), p.len());
        prop_assert_eq!(k.unmatched_gt.len() + k.pairs.len(), g.len());
        let got: f64 = k.pairs.iter().map(|&(i, j)| pair_cost(&pred.elements[i], &gt.elements[j], &opts)).sum();
        let best = brute(&cost);
        prop_assert!((got - best).abs() <= 1e-9, "{:?}: {} vs {}", kind, got, best);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn assignment_is_optimal(pred in common::small_doc(6), gt in common::small_doc(6)) {
        check(&pred, &gt)?;
    }

    #[test]
    fn self_match_is_identity(d in common::small_doc(6)) {
        let a = match_elements(&d, &d);
        for k in &a.kinds {
            for &(p, g) in &k.pairs {
                let cost = pair_cost(&d.elements[p], &d.elements[g], &EvalOptions::default());
                prop_assert!(cost <= 1e-12 || p == g);
            }
        }
    }
}
