//! `p`-direct sums and `p`-sums at the `S_p` coefficient level.
//!
//! The quotient norm of `R_p +_p C_p` is
//!
//! ```text
//! inf_{x_i = y_i + z_i} ( ‖[y_1 … y_n]‖_p^p + ‖[z_1; …; z_n]‖_p^p )^{1/p}
//! ```
//!
//! and more generally, for a partition of the indices into groups `g`, the row
//! part may be split as `∑_g ‖[y_i]_{i ∈ g}‖_p^p`. Singleton groups give
//! `ℓ_p +_p C_p`. The infimum is a convex problem; it is solved by accelerated
//! gradient descent on a smoothed objective, and certified from below by a dual
//! functional: for any `w`,
//!
//! ```text
//! Re⟨w, x⟩ / ( ∑_g ‖[w_i]_{i ∈ g}‖_{p'}^{p'} + ‖[w_1; …; w_n]‖_{p'}^{p'} )^{1/p'}
//! ```
//!
//! never exceeds the norm.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{CMatrix, Exponent, Svd, RANK_TOL};
use crate::rng;
use crate::schatten::{check_shapes, schatten_of_values, schatten_pow, sp_cp_norm, sp_rp_norm};
#[allow(unused_imports)]
use num_traits::Float;

pub use crate::bound::{Decomposition, NormBound, Witness, EXACT_TOL};

/// `(a^p + b^p)^{1/p}`, or `max(a, b)` for `p = ∞`.
pub fn direct_sum_p_norm(a: f64, b: f64, p: Exponent) -> f64 {
    p.lp_combine([a, b])
}

/// Controls for the iterative solvers.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SolverOptions {
    /// Iteration budget of the convex solver, shared across smoothing stages.
    pub max_iterations: usize,
    /// Relative duality gap at which the convex solver stops.
    pub tolerance: f64,
    /// Random starting points of the min-ℓ₂ maximisation, on top of the basis vectors.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            max_iterations: 5000,
            tolerance: 1e-10,
            restarts: 16,
            seed: 0,
        }
    }
}

/// Norm of `∑ x_i ⊗ t_i` in `S_p(R_p +_p C_p)`.
pub fn rp_plus_cp_norm(xs: &[CMatrix], p: Exponent, opts: &SolverOptions) -> Result<NormBound> {
    let groups = vec![(0..xs.len()).collect::<Vec<_>>()];
    let bound = grouped_plus_cp_norm(xs, &groups, p, opts)?;
    debug_assert!(
        bound.upper <= sp_rp_norm(xs, p)?.min(sp_cp_norm(xs, p)?) * (1.0 + 1e-12) + 1e-300
    );
    Ok(bound)
}

/// Norm of `∑ x_i ⊗ t_i` in `S_p(ℓ_p +_p C_p)`.
pub fn lp_plus_cp_norm(xs: &[CMatrix], p: Exponent, opts: &SolverOptions) -> Result<NormBound> {
    let groups: Vec<Vec<usize>> = (0..xs.len()).map(|i| vec![i]).collect();
    grouped_plus_cp_norm(xs, &groups, p, opts)
}

/// The quotient norm with the row part split along `groups` (see the module docs).
///
/// `groups` must partition `0..xs.len()`. The upper end is the value of the
/// best decomposition found (the witness), the lower end a dual certificate.
pub fn grouped_plus_cp_norm(
    xs: &[CMatrix],
    groups: &[Vec<usize>],
    p: Exponent,
    opts: &SolverOptions,
) -> Result<NormBound> {
    check_shapes(xs)?;
    let p = match p {
        Exponent::Finite(p) => p,
        Exponent::Infinity => {
            return Err(Error::ExponentOutOfRange {
                p: f64::INFINITY,
                variant: "the R_p +_p C_p solver",
            })
        }
    };
    check_groups(groups, xs.len())?;
    let zero = || {
        let ys = xs.iter().map(|x| CMatrix::zeros(x.rows(), x.cols())).collect();
        NormBound::exact(0.0, Witness::Decomposition(Decomposition::complete(xs, ys)))
    };
    let scale = xs.iter().map(CMatrix::max_abs).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(zero());
    }

    // Work on a unit-scale representative with canonical phases; the norm is
    // invariant under both up to the scale factor.
    let mut phases = Vec::with_capacity(xs.len());
    let mut work = Vec::with_capacity(xs.len());
    for x in xs {
        let a = crate::vector::canonical_phase(x);
        phases.push(a);
        work.push(x.scale(a / scale));
    }
    let actual = Problem {
        xs: work,
        groups: groups.to_vec(),
        p,
    };
    let (ys, phi, lower) = if let Some(closed) = actual.closed_form() {
        closed
    } else {
        // The search runs on data snapped to a grid, so inputs that differ by
        // rounding (a phase rotation, say) follow the same path. The
        // decomposition and dual functional it returns are then evaluated on
        // the actual data, which keeps both ends certified.
        let snapped = Problem {
            xs: actual.xs.iter().map(snap).collect(),
            groups: groups.to_vec(),
            p,
        };
        let (ys, w) = snapped.solve(opts);
        let lower = actual.dual_value(&w);
        // Snapping moves the endpoints y = 0 and y = x, so they are kept as candidates.
        let zeros: Vec<CMatrix> = actual.xs.iter().map(|x| CMatrix::zeros(x.rows(), x.cols())).collect();
        let mut best = (actual.eval(&ys, MU_STAGES[0]).exact, ys);
        for cand in [zeros, actual.xs.clone()] {
            let phi = actual.eval(&cand, MU_STAGES[0]).exact;
            if phi < best.0 {
                best = (phi, cand);
            }
        }
        (best.1, best.0, lower)
    };

    let ys = ys
        .into_iter()
        .zip(&phases)
        .map(|(y, a)| y.scale(a.conj() * scale))
        .collect();
    let upper = phi.powf(1.0 / p) * scale;
    Ok(NormBound::new(
        lower * scale,
        upper,
        Witness::Decomposition(Decomposition::complete(xs, ys)),
    ))
}

/// Grid spacing, relative to the largest entry, of the data the solver iterates on.
const SNAP: f64 = 1.0 / (1u64 << 30) as f64;

fn snap(m: &CMatrix) -> CMatrix {
    let g = |v: f64| (v / SNAP).round() * SNAP;
    let data = m.data().iter().map(|z| Complex64::new(g(z.re), g(z.im))).collect();
    CMatrix::new(m.rows(), m.cols(), data).expect("snapping keeps entries finite")
}

fn check_groups(groups: &[Vec<usize>], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    for g in groups {
        if g.is_empty() {
            return Err(Error::InvalidGroups);
        }
        for &i in g {
            if i >= n || seen[i] {
                return Err(Error::InvalidGroups);
            }
            seen[i] = true;
        }
    }
    if seen.iter().all(|&s| s) {
        Ok(())
    } else {
        Err(Error::InvalidGroups)
    }
}

const MU_STAGES: [f64; 8] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8];
const GAP_CHECK_EVERY: usize = 20;

struct Problem {
    xs: Vec<CMatrix>,
    groups: Vec<Vec<usize>>,
    p: f64,
}

/// Values of one iterate: the smoothed and exact objectives share the SVDs.
struct Eval {
    smooth: f64,
    exact: f64,
    row: Vec<Svd>,
    col: Svd,
}

impl Problem {
    /// `(y, Φ(y), lower)` where the optimum is known: at `p = 2` the objective
    /// separates entrywise and `y = x/2`; with one group of scalars both parts
    /// are Euclidean norms of `y` and `x - y`, so `y = x/2` again (any `y = tx`
    /// at `p = 1`), with value `2^{1/p-1} ‖x‖_2`.
    fn closed_form(&self) -> Option<(Vec<CMatrix>, f64, f64)> {
        let scalars = self.xs[0].shape() == (1, 1) && self.groups.len() == 1;
        if self.p != 2.0 && !scalars {
            return None;
        }
        let norm2: f64 = self.xs.iter().map(|x| x.frobenius().powi(2)).sum();
        let value = if self.p == 2.0 {
            (0.5 * norm2).sqrt()
        } else {
            2f64.powf(1.0 / self.p - 1.0) * norm2.sqrt()
        };
        let ys = self.xs.iter().map(|x| x.scale_real(0.5)).collect();
        Some((ys, value.powf(self.p), value))
    }

    fn row_block(&self, g: &[usize], ys: &[CMatrix]) -> CMatrix {
        let blocks: Vec<CMatrix> = g.iter().map(|&i| ys[i].clone()).collect();
        CMatrix::hstack(&blocks).expect("shapes checked")
    }

    fn col_block(&self, ys: &[CMatrix]) -> CMatrix {
        let zs: Vec<CMatrix> = self.xs.iter().zip(ys).map(|(x, y)| x.sub(y)).collect();
        CMatrix::vstack(&zs).expect("shapes checked")
    }

    fn eval(&self, ys: &[CMatrix], mu: f64) -> Eval {
        let p = self.p;
        let mut smooth = 0.0;
        let mut exact = 0.0;
        let mut row = Vec::with_capacity(self.groups.len());
        for g in &self.groups {
            let svd = self.row_block(g, ys).svd();
            smooth += smoothed_pow(&svd.s, p, mu);
            exact += schatten_pow(&svd.s, p);
            row.push(svd);
        }
        let col = self.col_block(ys).svd();
        smooth += smoothed_pow(&col.s, p, mu);
        exact += schatten_pow(&col.s, p);
        Eval {
            smooth,
            exact,
            row,
            col,
        }
    }

    /// Gradient of the smoothed objective in `y`, and the two dual candidates
    /// it is assembled from (row part, column part).
    fn gradient(&self, e: &Eval, mu: f64) -> (Vec<CMatrix>, Vec<CMatrix>, Vec<CMatrix>) {
        let p = self.p;
        let d = |s: f64| smoothed_derivative(s, p, mu);
        self.assemble(e, d)
    }

    /// Subgradients of the exact objective (`U Σ^{p-1} V^*` and `U V^*` at `p = 1`).
    fn exact_subgradient(&self, e: &Eval) -> (Vec<CMatrix>, Vec<CMatrix>, Vec<CMatrix>) {
        let p = self.p;
        let top = e
            .row
            .iter()
            .chain(core::iter::once(&e.col))
            .map(|s| s.s.first().cloned().unwrap_or(0.0))
            .fold(0.0, f64::max);
        let cut = top * RANK_TOL;
        self.assemble(e, move |s: f64| {
            if s <= cut {
                0.0
            } else if p == 1.0 {
                1.0
            } else {
                p * s.powf(p - 1.0)
            }
        })
    }

    fn assemble<F: Fn(f64) -> f64 + Copy>(
        &self,
        e: &Eval,
        d: F,
    ) -> (Vec<CMatrix>, Vec<CMatrix>, Vec<CMatrix>) {
        let n = self.xs.len();
        let (r, c) = self.xs[0].shape();
        let mut w_row = vec![CMatrix::zeros(r, c); n];
        for (g, svd) in self.groups.iter().zip(&e.row) {
            let parts = svd.reassemble(d).hsplit(g.len());
            for (&i, part) in g.iter().zip(parts) {
                w_row[i] = part;
            }
        }
        let w_col = e.col.reassemble(d).vsplit(n);
        let grad = w_row.iter().zip(&w_col).map(|(a, b)| a.sub(b)).collect();
        (grad, w_row, w_col)
    }

    /// `Re⟨w, x⟩ / N^*(w)`, a lower bound for the norm.
    fn dual_value(&self, w: &[CMatrix]) -> f64 {
        let num: f64 = w.iter().zip(&self.xs).map(|(a, b)| a.real_dot(b)).sum();
        if num <= 0.0 {
            return 0.0;
        }
        let q = Exponent::Finite(self.p).conjugate();
        let mut parts = Vec::with_capacity(self.groups.len() + 1);
        for g in &self.groups {
            parts.push(schatten_of_values(&self.row_block(g, w).singular_values(), q));
        }
        parts.push(schatten_of_values(
            &CMatrix::vstack(w).expect("shapes checked").singular_values(),
            q,
        ));
        let den = q.lp_combine(parts);
        if den > 0.0 {
            num / den
        } else {
            0.0
        }
    }

    /// Best dual candidate built from the (sub)gradients at an iterate.
    fn dual_from(&self, e: &Eval, mu: f64) -> (f64, Vec<CMatrix>) {
        let mut best = (0.0f64, self.xs.clone());
        let mut offer = |w: Vec<CMatrix>| {
            let v = self.dual_value(&w);
            if v > best.0 {
                best = (v, w);
            }
        };
        let (_, r1, c1) = self.exact_subgradient(e);
        let (_, r2, c2) = self.gradient(e, mu);
        for (wr, wc) in [(r1, c1), (r2, c2)] {
            // Both parts agree at an optimum; their normalised average is
            // usually better than either one away from it.
            let nr = dual_norm_scale(self, &wr);
            let nc = dual_norm_scale(self, &wc);
            if nr > 0.0 && nc > 0.0 {
                let avg: Vec<CMatrix> = wr
                    .iter()
                    .zip(&wc)
                    .map(|(a, b)| a.scale_real(1.0 / nr).add(&b.scale_real(1.0 / nc)))
                    .collect();
                offer(avg);
            }
            offer(wr);
            offer(wc);
        }
        best
    }

    /// Returns the best decomposition `y` found and the best dual functional `w`.
    fn solve(&self, opts: &SolverOptions) -> (Vec<CMatrix>, Vec<CMatrix>) {
        let p = self.p;
        let n = self.xs.len();
        let (r, c) = self.xs[0].shape();
        let zeros = vec![CMatrix::zeros(r, c); n];
        let halves: Vec<CMatrix> = self.xs.iter().map(|x| x.scale_real(0.5)).collect();

        let mut best_y = zeros.clone();
        let mut best_phi = f64::INFINITY;
        let mut lower = (self.dual_value(&self.xs), self.xs.clone());
        let raise = |lower: &mut (f64, Vec<CMatrix>), cand: (f64, Vec<CMatrix>)| {
            if cand.0 > lower.0 {
                *lower = cand;
            }
        };
        for start in [zeros, self.xs.clone(), halves] {
            let e = self.eval(&start, MU_STAGES[0]);
            raise(&mut lower, self.dual_from(&e, MU_STAGES[0]));
            if e.exact < best_phi {
                best_phi = e.exact;
                best_y = start;
            }
        }

        let tol = opts.tolerance.max(1e-15);
        let done = |phi: f64, lower: f64| phi.powf(1.0 / p) - lower <= tol * phi.powf(1.0 / p);
        if done(best_phi, lower.0) {
            return (best_y, lower.1);
        }

        let stages: &[f64] = if p == 2.0 { &MU_STAGES[..1] } else { &MU_STAGES };
        let per_stage = (opts.max_iterations / stages.len()).max(1);
        let mut y = best_y.clone();
        let mut lip = 1.0f64;

        'stages: for &mu in stages {
            let mut z = y.clone();
            let mut t = 1.0f64;
            let mut ez = self.eval(&z, mu);
            let mut f_prev = self.eval(&y, mu).smooth;
            lip = lip.max(1e-3);
            for it in 0..per_stage {
                let (grad, _, _) = self.gradient(&ez, mu);
                let gnorm2: f64 = grad.iter().map(|g| g.real_dot(g)).sum();
                if gnorm2 == 0.0 {
                    break;
                }
                lip *= 0.8;
                let (cand, ec) = loop {
                    let cand: Vec<CMatrix> =
                        z.iter().zip(&grad).map(|(a, g)| a.axpy(-1.0 / lip, g)).collect();
                    let ec = self.eval(&cand, mu);
                    if ec.smooth <= ez.smooth - 0.5 * gnorm2 / lip + 1e-15 * ez.smooth.abs()
                        || lip > 1e20
                    {
                        break (cand, ec);
                    }
                    lip *= 2.0;
                };
                if ec.exact < best_phi {
                    best_phi = ec.exact;
                    best_y = cand.clone();
                }
                let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
                if ec.smooth > f_prev {
                    // Function-value restart: drop the momentum.
                    t = 1.0;
                    z = cand.clone();
                    ez = ec;
                    f_prev = ez.smooth;
                    y = cand;
                } else {
                    let beta = (t - 1.0) / t_next;
                    z = cand
                        .iter()
                        .zip(&y)
                        .map(|(a, b)| a.axpy(beta, &a.sub(b)))
                        .collect();
                    f_prev = ec.smooth;
                    y = cand;
                    t = t_next;
                    ez = self.eval(&z, mu);
                }
                if it % GAP_CHECK_EVERY == GAP_CHECK_EVERY - 1 {
                    let ey = self.eval(&best_y, mu);
                    raise(&mut lower, self.dual_from(&ey, mu));
                    if done(best_phi, lower.0) {
                        break 'stages;
                    }
                }
            }
            let ey = self.eval(&best_y, mu);
            raise(&mut lower, self.dual_from(&ey, mu));
            let ey = self.eval(&y, mu);
            raise(&mut lower, self.dual_from(&ey, mu));
            if done(best_phi, lower.0) {
                break;
            }
        }
        (best_y, lower.1)
    }
}

fn dual_norm_scale(problem: &Problem, w: &[CMatrix]) -> f64 {
    let num: f64 = w.iter().zip(&problem.xs).map(|(a, b)| a.real_dot(b)).sum();
    let v = problem.dual_value(w);
    if v > 0.0 {
        num / v
    } else {
        0.0
    }
}

/// `∑ ((σ² + μ²)^{p/2} - μ^p)`.
fn smoothed_pow(s: &[f64], p: f64, mu: f64) -> f64 {
    let mp = mu.powf(p);
    s.iter().map(|&x| (x * x + mu * mu).powf(0.5 * p) - mp).sum()
}

/// Derivative of `(σ² + μ²)^{p/2}` in `σ`.
fn smoothed_derivative(s: f64, p: f64, mu: f64) -> f64 {
    if s == 0.0 {
        return 0.0;
    }
    p * s * (s * s + mu * mu).powf(0.5 * p - 1.0)
}

/// Norm of `∑ x_i ⊗ t_i` in `B(ℓ_2) ⊗_min (min ℓ_2)`, i.e.
/// `sup { ‖∑ ξ_i x_i‖ : ∑ |ξ_i|² ≤ 1 }`.
///
/// The lower end comes from alternating maximisation over `(ξ, u, v)` started
/// at every basis vector and at `opts.restarts` random unit vectors; the
/// upper end is `min(‖(∑ x_i x_i^*)^{1/2}‖, ‖(∑ x_i^* x_i)^{1/2}‖)`.
pub fn min_l2_norm_bounds(xs: &[CMatrix], opts: &SolverOptions) -> Result<NormBound> {
    check_shapes(xs)?;
    let n = xs.len();
    let upper = sp_rp_norm(xs, Exponent::Infinity)?.min(sp_cp_norm(xs, Exponent::Infinity)?);

    let mut starts: Vec<Vec<Complex64>> = Vec::with_capacity(n + opts.restarts + 1);
    for i in 0..n {
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        e[i] = Complex64::new(1.0, 0.0);
        starts.push(e);
    }
    let mut r = rng::seeded(opts.seed);
    for _ in 0..opts.restarts {
        starts.push(rng::unit_vector(&mut r, n));
    }

    let mut best_val = -1.0;
    let mut best_xi = starts[0].clone();
    for start in starts {
        let (val, xi) = alternate(xs, start);
        if val > best_val * (1.0 + 1e-14) || (val >= best_val && lex_less(&xi, &best_xi)) {
            best_val = val;
            best_xi = xi;
        }
    }
    let max_single = xs.iter().map(CMatrix::operator_norm).fold(0.0, f64::max);
    debug_assert!(best_val >= max_single * (1.0 - 1e-12));
    let lower = best_val.max(0.0);
    Ok(NormBound::new(lower, upper.max(lower), Witness::UnitVector(best_xi)))
}

fn lex_less(a: &[Complex64], b: &[Complex64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x.re != y.re {
            return x.re < y.re;
        }
        if x.im != y.im {
            return x.im < y.im;
        }
    }
    false
}

/// Monotone ascent of `|⟨u, (∑ ξ_i x_i) v⟩|`. Returns the final value
/// `‖∑ ξ_i x_i‖` together with `ξ`.
fn alternate(xs: &[CMatrix], mut xi: Vec<Complex64>) -> (f64, Vec<Complex64>) {
    let (r, c) = xs[0].shape();
    let combine = |xi: &[Complex64]| {
        let mut m = CMatrix::zeros(r, c);
        for (x, a) in xs.iter().zip(xi) {
            m = m.add(&x.scale(*a));
        }
        m
    };
    let mut value = combine(&xi).operator_norm();
    for _ in 0..500 {
        let svd = combine(&xi).svd();
        let u: Vec<Complex64> = (0..r).map(|i| svd.u[(i, 0)]).collect();
        let v: Vec<Complex64> = (0..c).map(|j| svd.v[(j, 0)]).collect();
        // c_i = u^* x_i v
        let coeffs: Vec<Complex64> = xs
            .iter()
            .map(|x| {
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..r {
                    let mut row = Complex64::new(0.0, 0.0);
                    for j in 0..c {
                        row += x[(i, j)] * v[j];
                    }
                    acc += u[i].conj() * row;
                }
                acc
            })
            .collect();
        let norm = coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            break;
        }
        let next: Vec<Complex64> = coeffs.iter().map(|z| z.conj() / norm).collect();
        let next_value = combine(&next).operator_norm();
        if next_value <= value * (1.0 + 1e-15) {
            if next_value >= value {
                xi = next;
                value = next_value;
            }
            break;
        }
        xi = next;
        value = next_value;
    }
    (value, xi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn scalar(v: f64) -> CMatrix {
        CMatrix::scalar(Complex64::new(v, 0.0))
    }

    #[test]
    fn direct_sum_examples() {
        assert_abs_diff_eq!(direct_sum_p_norm(3.0, 4.0, Exponent::Finite(2.0)), 5.0, epsilon = 1e-12);
        assert_abs_diff_eq!(direct_sum_p_norm(2.5, 0.0, Exponent::Finite(1.3)), 2.5, epsilon = 1e-12);
        assert_abs_diff_eq!(direct_sum_p_norm(1.0, 1.0, Exponent::Finite(1.0)), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(direct_sum_p_norm(1.0, 3.0, Exponent::Infinity), 3.0, epsilon = 1e-12);
    }

    #[test]
    fn unit_scalar_quotient() {
        let opts = SolverOptions::default();
        for p in [1.0, 1.25, 1.5, 2.0] {
            let b = rp_plus_cp_norm(&[scalar(1.0)], Exponent::Finite(p), &opts).unwrap();
            let expect = 2f64.powf(1.0 / p - 1.0);
            assert!(b.lower <= b.upper);
            assert_abs_diff_eq!(b.upper, expect, epsilon = 1e-6);
            assert_abs_diff_eq!(b.lower, expect, epsilon = 1e-6);
        }
    }

    #[test]
    fn decomposition_reassembles() {
        let xs = [CMatrix::unit(2, 2, 0, 0), CMatrix::unit(2, 2, 1, 1)];
        let b = rp_plus_cp_norm(&xs, Exponent::Finite(1.5), &SolverOptions::default()).unwrap();
        if let Witness::Decomposition(d) = &b.witness {
            for ((x, y), z) in xs.iter().zip(&d.ys).zip(&d.zs) {
                assert!(y.add(z).sub(x).max_abs() < 1e-12);
            }
        } else {
            panic!("expected a decomposition witness");
        }
    }

    #[test]
    fn groups_must_partition() {
        let xs = [scalar(1.0), scalar(2.0)];
        let p = Exponent::Finite(1.0);
        let opts = SolverOptions::default();
        assert!(grouped_plus_cp_norm(&xs, &[vec![0]], p, &opts).is_err());
        assert!(grouped_plus_cp_norm(&xs, &[vec![0, 1], vec![1]], p, &opts).is_err());
        assert!(grouped_plus_cp_norm(&xs, &[vec![1], vec![0]], p, &opts).is_ok());
        assert!(rp_plus_cp_norm(&xs, Exponent::Infinity, &opts).is_err());
    }

    #[test]
    fn min_l2_examples() {
        let opts = SolverOptions::default();
        let b = min_l2_norm_bounds(&[scalar(1.0)], &opts).unwrap();
        assert_abs_diff_eq!(b.lower, 1.0, epsilon = 1e-12);
        let b = min_l2_norm_bounds(&[scalar(1.0), scalar(1.0)], &opts).unwrap();
        assert_abs_diff_eq!(b.lower, 2f64.sqrt(), epsilon = 1e-12);
        assert!(b.exact);
        let b = min_l2_norm_bounds(&[CMatrix::unit(2, 2, 0, 0), CMatrix::unit(2, 2, 1, 1)], &opts).unwrap();
        assert_abs_diff_eq!(b.lower, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b.upper, 1.0, epsilon = 1e-12);
    }
}
