//! Derivative-free local search: a standard Nelder–Mead simplex, run from
//! many deterministic restart points by the callers in this module's parent.

/// Nelder–Mead settings. Coefficients are the textbook choices
/// (reflection 1, expansion 2, contraction ½, shrink ½).
#[derive(Debug, Clone, Copy)]
pub(crate) struct NelderMead {
    pub max_iterations: usize,
    /// Converged when the simplex value spread drops below this (bits).
    pub f_tol: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct OptimOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub converged: bool,
}

impl NelderMead {
    /// Maximize f from x0 with the given initial simplex step.
    pub fn maximize<F: Fn(&[f64]) -> f64>(&self, f: F, x0: &[f64], step: f64) -> OptimOutcome {
        let n = x0.len();
        assert!(n >= 1, "need at least one parameter");
        let g = |x: &[f64]| -f(x);

        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        simplex.push((x0.to_vec(), g(x0)));
        for i in 0..n {
            let mut x = x0.to_vec();
            x[i] += step;
            let v = g(&x);
            simplex.push((x, v));
        }

        let mut converged = false;
        for _ in 0..self.max_iterations {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let spread = simplex[n].1 - simplex[0].1;
            if spread.abs() < self.f_tol {
                converged = true;
                break;
            }

            // Centroid of all but the worst point.
            let mut centroid = vec![0.0; n];
            for (x, _) in simplex.iter().take(n) {
                for (c, xi) in centroid.iter_mut().zip(x.iter()) {
                    *c += xi / n as f64;
                }
            }

            let worst = simplex[n].clone();
            let lerp = |t: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(worst.0.iter())
                    .map(|(c, w)| c + t * (c - w))
                    .collect()
            };

            let reflected = lerp(1.0);
            let f_r = g(&reflected);
            if f_r < simplex[0].1 {
                let expanded = lerp(2.0);
                let f_e = g(&expanded);
                simplex[n] = if f_e < f_r {
                    (expanded, f_e)
                } else {
                    (reflected, f_r)
                };
            } else if f_r < simplex[n - 1].1 {
                simplex[n] = (reflected, f_r);
            } else {
                let (contracted, f_c) = if f_r < worst.1 {
                    let x = lerp(0.5);
                    let v = g(&x);
                    (x, v)
                } else {
                    let x = lerp(-0.5);
                    let v = g(&x);
                    (x, v)
                };
                if f_c < worst.1.min(f_r) {
                    simplex[n] = (contracted, f_c);
                } else {
                    // Shrink toward the best point.
                    let best = simplex[0].0.clone();
                    for entry in simplex.iter_mut().skip(1) {
                        for (xi, bi) in entry.0.iter_mut().zip(best.iter()) {
                            *xi = bi + 0.5 * (*xi - bi);
                        }
                        entry.1 = g(&entry.0);
                    }
                }
            }
        }

        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (x, value) = simplex.swap_remove(0);
        OptimOutcome {
            x,
            value: -value,
            converged,
        }
    }
}
