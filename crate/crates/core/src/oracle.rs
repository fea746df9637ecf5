//! Exact expected efficiency for tiny fully observable horizons.
//!
//! Enumerates every (symbol, action) history of the N=2 game with its exact
//! probability and propagates the weight matrix deterministically — no
//! sampling anywhere, so ensemble estimators can be checked against it. The
//! recursion carries its own arithmetic on plain 2x2 tables rather than
//! reusing the agent kernel, keeping the two computation routes independent.

use crate::error::{PsError, Result};

const MAX_HORIZON: u64 = 8;

/// Exact r(t) for t = 1..=t_max of the fully observable N=2 invasion game
/// with unit reward; `t_max` is capped at 8 (the history tree has 4^(t-1)
/// branches).
pub fn oracle_exact(gamma: f64, t_max: u64) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(PsError::InvalidParameter(format!(
            "gamma must be in [0, 1], got {gamma}"
        )));
    }
    if t_max == 0 || t_max > MAX_HORIZON {
        return Err(PsError::InvalidParameter(format!(
            "oracle horizon must be in 1..={MAX_HORIZON}, got {t_max}"
        )));
    }
    let mut out = vec![0.0; t_max as usize];
    descend([[1.0, 1.0], [1.0, 1.0]], 1.0, 0, gamma, &mut out);
    Ok(out)
}

fn expected_r(h: &[[f64; 2]; 2]) -> f64 {
    0.5 * (h[0][0] / (h[0][0] + h[0][1]) + h[1][1] / (h[1][0] + h[1][1]))
}

fn descend(h: [[f64; 2]; 2], prob: f64, depth: usize, gamma: f64, out: &mut [f64]) {
    out[depth] += prob * expected_r(&h);
    if depth + 1 == out.len() {
        return;
    }
    for s in 0..2 {
        let row_sum = h[s][0] + h[s][1];
        for a in 0..2 {
            let p_branch = 0.5 * h[s][a] / row_sum;
            let mut next = h;
            for row in &mut next {
                for w in row.iter_mut() {
                    *w -= gamma * (*w - 1.0);
                }
            }
            if a == s {
                next[s][a] += 1.0;
            }
            descend(next, prob * p_branch, depth + 1, gamma, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn untrained_first_step_is_half() {
        for gamma in [0.0, 0.5, 1.0] {
            let r = oracle_exact(gamma, 1).unwrap();
            assert_eq!(r, vec![0.5]);
        }
    }

    #[test]
    fn second_step_from_hand_enumeration() {
        // One step of play: with probability 1/2 the (uniform) first action
        // was correct, boosting one row to (2, 1) for r = (2/3 + 1/2)/2;
        // otherwise nothing changed and r stays 1/2. Expected: 13/24. With
        // full decay (gamma = 1) the boost is identical one step later, so
        // the value coincides.
        let expect = 0.5 * (2.0 / 3.0 + 0.5) / 2.0 + 0.5 * 0.5;
        assert_abs_diff_eq!(expect, 13.0 / 24.0, epsilon = 1e-15);
        for gamma in [0.0, 1.0] {
            let r = oracle_exact(gamma, 2).unwrap();
            assert_abs_diff_eq!(r[1], 13.0 / 24.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn brute_force_sequence_enumeration_agrees() {
        // Independent oracle for the oracle: enumerate complete
        // (s_1, a_1, ..., s_k, a_k) sequences non-recursively.
        let gamma = 0.5;
        let t_max = 5usize;
        let mut expect = vec![0.0; t_max];
        expect[0] = 0.5;
        for t in 2..=t_max {
            let steps = t - 1;
            let mut total = 0.0;
            for code in 0..4usize.pow(steps as u32) {
                let mut h = [[1.0f64, 1.0], [1.0, 1.0]];
                let mut prob = 1.0;
                let mut c = code;
                for _ in 0..steps {
                    let s = c % 2;
                    let a = (c / 2) % 2;
                    c /= 4;
                    prob *= 0.5 * h[s][a] / (h[s][0] + h[s][1]);
                    for row in &mut h {
                        for w in row.iter_mut() {
                            *w -= gamma * (*w - 1.0);
                        }
                    }
                    if a == s {
                        h[s][a] += 1.0;
                    }
                }
                total += prob * (0.5 * (h[0][0] / (h[0][0] + h[0][1]) + h[1][1] / (h[1][0] + h[1][1])));
            }
            expect[t - 1] = total;
        }
        let got = oracle_exact(gamma, t_max as u64).unwrap();
        for (g, e) in got.iter().zip(&expect) {
            assert_abs_diff_eq!(g, e, epsilon = 1e-12);
        }
    }

    #[test]
    fn horizon_limits_enforced() {
        assert!(oracle_exact(0.5, 0).is_err());
        assert!(oracle_exact(0.5, 9).is_err());
        assert!(oracle_exact(1.5, 4).is_err());
        assert_eq!(oracle_exact(0.3, 8).unwrap().len(), 8);
    }

    #[test]
    fn values_monotone_and_bounded_at_zero_gamma() {
        let r = oracle_exact(0.0, 8).unwrap();
        for w in r.windows(2) {
            assert!(w[1] >= w[0] - 1e-12, "learning curve must not fall at gamma=0: {r:?}");
        }
        assert!(r.iter().all(|&x| (0.5..=1.0).contains(&x)));
    }
}
