//! Nelder-Mead downhill simplex, unconstrained.

pub(crate) struct NelderMead {
    pub max_iterations: usize,
    /// Stop once `f_worst - f_best` over the simplex drops to this value.
    pub tolerance: f64,
    pub initial_step: f64,
}

pub(crate) struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Best value after each iteration.
    pub history: Vec<f64>,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

impl NelderMead {
    pub fn minimize<F>(&self, f: F, start: &[f64]) -> Minimum
    where
        F: Fn(&[f64]) -> f64,
    {
        let n = start.len();
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        simplex.push((start.to_vec(), f(start)));
        for i in 0..n {
            let mut x = start.to_vec();
            x[i] += if x[i] != 0.0 {
                self.initial_step * x[i].abs().max(1.0)
            } else {
                self.initial_step
            };
            let v = f(&x);
            simplex.push((x, v));
        }

        let mut history = Vec::new();
        let mut iterations = 0;
        let mut converged = false;
        while iterations < self.max_iterations {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let best = simplex[0].1;
            let worst = simplex[n].1;
            if worst - best <= self.tolerance {
                converged = true;
                break;
            }
            iterations += 1;

            let mut centroid = vec![0.0; n];
            for (x, _) in &simplex[..n] {
                for (c, xi) in centroid.iter_mut().zip(x) {
                    *c += xi / n as f64;
                }
            }
            let toward = |coef: f64, from: &[f64]| -> Vec<f64> {
                centroid.iter().zip(from).map(|(c, w)| c + coef * (c - w)).collect()
            };

            let reflected = toward(REFLECT, &simplex[n].0);
            let fr = f(&reflected);
            if fr < simplex[0].1 {
                let expanded = toward(EXPAND, &simplex[n].0);
                let fe = f(&expanded);
                simplex[n] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
            } else if fr < simplex[n - 1].1 {
                simplex[n] = (reflected, fr);
            } else {
                // Outside contraction if the reflection helped at all,
                // inside contraction otherwise.
                let (contracted, fc) = if fr < simplex[n].1 {
                    let x = toward(CONTRACT, &simplex[n].0);
                    let v = f(&x);
                    (x, v)
                } else {
                    let x = toward(-CONTRACT, &simplex[n].0);
                    let v = f(&x);
                    (x, v)
                };
                if fc < fr.min(simplex[n].1) {
                    simplex[n] = (contracted, fc);
                } else {
                    let anchor = simplex[0].0.clone();
                    for (x, v) in simplex.iter_mut().skip(1) {
                        for (xi, ai) in x.iter_mut().zip(&anchor) {
                            *xi = ai + SHRINK * (*xi - ai);
                        }
                        *v = f(x);
                    }
                }
            }
            history.push(simplex.iter().map(|s| s.1).fold(f64::INFINITY, f64::min));
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (x, value) = simplex.swap_remove(0);
        Minimum {
            x,
            value,
            iterations,
            converged,
            history,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_rosenbrock_minimum() {
        let nm = NelderMead {
            max_iterations: 5000,
            tolerance: 1e-20,
            initial_step: 0.5,
        };
        let rosen = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let min = nm.minimize(rosen, &[-1.2, 1.0]);
        assert!(min.converged);
        assert!((min.x[0] - 1.0).abs() < 1e-6 && (min.x[1] - 1.0).abs() < 1e-6);
        assert!(min.history.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn respects_iteration_budget() {
        let nm = NelderMead {
            max_iterations: 3,
            tolerance: 0.0,
            initial_step: 1.0,
        };
        let min = nm.minimize(|x| x.iter().map(|v| v * v).sum(), &[3.0, -2.0, 1.0, 5.0]);
        assert_eq!(min.iterations, 3);
        assert!(!min.converged);
    }
}
