//! Reaction-diffusion integration and linearised spectra of the coupled system
//!
//! ```text
//! dx_i/dt = f_i(x_i, y_i) + sum_j w_ij (x_j - x_i)
//! dy_i/dt = g_i(x_i, y_i) + sum_j w_ij (y_j - y_i)
//! ```
//!
//! States are laid out as `(x_0..x_{n-1}, y_0..y_{n-1})`.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{Complex, DMatrix, DVector};
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::linalg::SquareMatrix;
use crate::spectral::laplacian_spectrum;
use crate::stability::{Jacobian2, LocalDynamics};

/// States beyond this magnitude count as diverged.
pub const DIVERGENCE_LIMIT: f64 = 1e12;
pub const DEFAULT_DT: f64 = 1e-3;
pub const DEFAULT_HORIZON: f64 = 50.0;

const NEWTON_MAX_ITER: usize = 100;
const NEWTON_TOL: f64 = 1e-12;

/// Rosenzweig–MacArthur predator-prey parameters:
///
/// ```text
/// f = r x (1 - x/k) - a x y / (1 + a h x)
/// g = e a x y / (1 + a h x) - m y
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RosenzweigParams {
    pub r: f64,
    pub k: f64,
    pub a: f64,
    pub h: f64,
    pub e: f64,
    pub m: f64,
}

impl RosenzweigParams {
    /// Coexistence equilibrium, if it lies in the open positive quadrant.
    pub fn equilibrium(&self) -> Option<[f64; 2]> {
        let RosenzweigParams { r, k, a, h, e, m } = *self;
        let denom = a * (e - m * h);
        if denom <= 0.0 {
            return None;
        }
        let x = m / denom;
        let y = r * (1.0 - x / k) * (1.0 + a * h * x) / a;
        (x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite()).then_some([x, y])
    }

    fn reaction(&self, x: f64, y: f64) -> [f64; 2] {
        let RosenzweigParams { r, k, a, h, e, m } = *self;
        let holling = a * x / (1.0 + a * h * x);
        [r * x * (1.0 - x / k) - holling * y, e * holling * y - m * y]
    }

    fn jacobian_at(&self, x: f64, y: f64) -> Jacobian2 {
        let RosenzweigParams { r, k, a, h, e, m } = *self;
        let s = 1.0 + a * h * x;
        Jacobian2::new(
            r * (1.0 - 2.0 * x / k) - a * y / (s * s),
            -a * x / s,
            e * a * y / (s * s),
            e * a * x / s - m,
        )
    }
}

/// Reaction terms of one patch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PatchModel {
    /// `(f, g) = J (state - equilibrium)`.
    Linear {
        jacobian: Jacobian2,
        equilibrium: [f64; 2],
    },
    Rosenzweig(RosenzweigParams),
}

impl PatchModel {
    pub fn linear(jacobian: Jacobian2) -> Self {
        Self::Linear {
            jacobian,
            equilibrium: [0.0, 0.0],
        }
    }

    pub fn rosenzweig(params: RosenzweigParams) -> Result<Self> {
        let all = [params.r, params.k, params.a, params.h, params.e, params.m];
        if all.iter().any(|v| !v.is_finite() || *v < 0.0) || params.r == 0.0 || params.k == 0.0 {
            return Err(Error::InvalidParameter(
                "rosenzweig parameters must be finite and positive",
            ));
        }
        if params.equilibrium().is_none() {
            return Err(Error::InvalidParameter(
                "rosenzweig parameters have no interior equilibrium",
            ));
        }
        Ok(Self::Rosenzweig(params))
    }

    pub fn equilibrium(&self) -> [f64; 2] {
        match self {
            Self::Linear { equilibrium, .. } => *equilibrium,
            Self::Rosenzweig(p) => p.equilibrium().expect("validated on construction"),
        }
    }

    pub fn reaction(&self, x: f64, y: f64) -> [f64; 2] {
        match self {
            Self::Linear {
                jacobian: j,
                equilibrium: [x0, y0],
            } => {
                let (dx, dy) = (x - x0, y - y0);
                [j.0[0][0] * dx + j.0[0][1] * dy, j.0[1][0] * dx + j.0[1][1] * dy]
            }
            Self::Rosenzweig(p) => p.reaction(x, y),
        }
    }

    pub fn jacobian_at(&self, x: f64, y: f64) -> Jacobian2 {
        match self {
            Self::Linear { jacobian, .. } => *jacobian,
            Self::Rosenzweig(p) => p.jacobian_at(x, y),
        }
    }

    /// Jacobian at the patch's own equilibrium.
    pub fn jacobian(&self) -> Jacobian2 {
        let [x, y] = self.equilibrium();
        self.jacobian_at(x, y)
    }
}

/// Patch Jacobians at each patch's own equilibrium.
pub fn local_dynamics(models: &[PatchModel]) -> Result<LocalDynamics> {
    LocalDynamics::new(models.iter().map(PatchModel::jacobian).collect())
}

fn check_dims(g: &WeightedGraph, models: &[PatchModel], state: &[f64]) -> Result<usize> {
    let n = g.node_count();
    if models.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: models.len(),
        });
    }
    if state.len() != 2 * n {
        return Err(Error::DimensionMismatch {
            expected: 2 * n,
            got: state.len(),
        });
    }
    Ok(n)
}

/// Time derivative of the coupled system.
pub fn rhs(g: &WeightedGraph, models: &[PatchModel], state: &[f64]) -> Result<Vec<f64>> {
    let n = check_dims(g, models, state)?;
    let mut out = vec![0.0; 2 * n];
    rhs_into(g, models, state, &mut out);
    Ok(out)
}

fn rhs_into(g: &WeightedGraph, models: &[PatchModel], state: &[f64], out: &mut [f64]) {
    let n = models.len();
    let (x, y) = state.split_at(n);
    for (i, m) in models.iter().enumerate() {
        let [f, gv] = m.reaction(x[i], y[i]);
        out[i] = f;
        out[n + i] = gv;
    }
    for e in g.edges() {
        let dx = e.w * (x[e.v] - x[e.u]);
        let dy = e.w * (y[e.v] - y[e.u]);
        out[e.u] += dx;
        out[e.v] -= dx;
        out[n + e.u] += dy;
        out[n + e.v] -= dy;
    }
}

/// Fixed point of the coupled system near the patch equilibria.
#[derive(Debug, Clone, PartialEq)]
pub struct Equilibrium {
    pub state: Vec<f64>,
    /// Located by Newton iteration rather than known in closed form.
    pub approximate: bool,
}

/// Coupled equilibrium. When every patch shares one equilibrium the coupling
/// vanishes there and it is exact; otherwise Newton's method is started
/// from the patch equilibria.
pub fn equilibrium(g: &WeightedGraph, models: &[PatchModel]) -> Result<Equilibrium> {
    let n = models.len();
    let mut state = vec![0.0; 2 * n];
    for (i, m) in models.iter().enumerate() {
        let [x, y] = m.equilibrium();
        state[i] = x;
        state[n + i] = y;
    }
    check_dims(g, models, &state)?;
    let shared = models.windows(2).all(|w| w[0].equilibrium() == w[1].equilibrium());
    if shared {
        return Ok(Equilibrium {
            state,
            approximate: false,
        });
    }
    for _ in 0..NEWTON_MAX_ITER {
        let f = rhs(g, models, &state)?;
        let scale = state.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        if f.iter().all(|v| v.abs() <= NEWTON_TOL * scale) {
            return Ok(Equilibrium {
                state,
                approximate: true,
            });
        }
        let jac = system_jacobian(g, models, &state);
        let step = DMatrix::from_row_slice(2 * n, 2 * n, jac.as_slice())
            .lu()
            .solve(&DVector::from_column_slice(&f))
            .ok_or(Error::InvalidParameter(
                "singular Jacobian while locating the equilibrium",
            ))?;
        state.iter_mut().zip(step.iter()).for_each(|(s, d)| *s -= d);
        if state.iter().any(|v| !v.is_finite()) {
            break;
        }
    }
    Err(Error::NoConvergence {
        sweeps: NEWTON_MAX_ITER,
    })
}

/// `[[F_X - L, F_Y], [G_X, G_Y - L]]` at `state`.
fn system_jacobian(g: &WeightedGraph, models: &[PatchModel], state: &[f64]) -> SquareMatrix {
    let n = models.len();
    let js: Vec<Jacobian2> = models
        .iter()
        .enumerate()
        .map(|(i, m)| m.jacobian_at(state[i], state[n + i]))
        .collect();
    block_matrix(g, &js)
}

fn block_matrix(g: &WeightedGraph, js: &[Jacobian2]) -> SquareMatrix {
    let n = js.len();
    let lap = g.laplacian().into_matrix();
    let mut a = SquareMatrix::zeros(2 * n);
    for (i, j) in js.iter().enumerate() {
        a[(i, i)] = j.0[0][0];
        a[(i, n + i)] = j.0[0][1];
        a[(n + i, i)] = j.0[1][0];
        a[(n + i, n + i)] = j.0[1][1];
    }
    for r in 0..n {
        for c in 0..n {
            a[(r, c)] -= lap[(r, c)];
            a[(n + r, n + c)] -= lap[(r, c)];
        }
    }
    a
}

/// The `2n x 2n` linearisation `[[J_xx - L, J_xy], [J_yx, J_yy - L]]` built
/// from one Jacobian per patch.
pub fn linearized_matrix(g: &WeightedGraph, dynamics: &LocalDynamics) -> Result<SquareMatrix> {
    if dynamics.len() != g.node_count() {
        return Err(Error::DimensionMismatch {
            expected: g.node_count(),
            got: dynamics.len(),
        });
    }
    Ok(block_matrix(g, dynamics.jacobians()))
}

/// Eigenvalues of a 2x2 matrix.
pub fn eigenvalues2(j: &Jacobian2) -> [Complex<f64>; 2] {
    let half_tr = 0.5 * j.trace();
    let disc = 0.25 * j.discriminant();
    if disc >= 0.0 {
        let s = Float::sqrt(disc);
        [Complex::new(half_tr + s, 0.0), Complex::new(half_tr - s, 0.0)]
    } else {
        let s = Float::sqrt(-disc);
        [Complex::new(half_tr, s), Complex::new(half_tr, -s)]
    }
}

fn sort_spectrum(v: &mut [Complex<f64>]) {
    v.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
}

fn dense_eigenvalues(m: &SquareMatrix) -> Vec<Complex<f64>> {
    let d = m.dim();
    let mut out: Vec<Complex<f64>> = DMatrix::from_row_slice(d, d, m.as_slice())
        .complex_eigenvalues()
        .iter()
        .copied()
        .collect();
    sort_spectrum(&mut out);
    out
}

/// All `2n` eigenvalues of the linearised coupled system, by real part
/// descending. Identical patches are solved mode by mode as eigenvalues of
/// `J - lambda_j I`; otherwise the dense matrix is decomposed.
pub fn linearized_spectrum(g: &WeightedGraph, dynamics: &LocalDynamics) -> Result<Vec<Complex<f64>>> {
    let m = linearized_matrix(g, dynamics)?;
    if !dynamics.is_uniform() || dynamics.is_empty() {
        return Ok(dense_eigenvalues(&m));
    }
    let j = *dynamics.get(0);
    let mut out = Vec::with_capacity(2 * g.node_count());
    for lambda in laplacian_spectrum(g)?.eigenvalues {
        out.extend(eigenvalues2(&shift(&j, lambda)));
    }
    sort_spectrum(&mut out);
    Ok(out)
}

/// As [`linearized_spectrum`], always through the dense matrix.
pub fn linearized_spectrum_dense(g: &WeightedGraph, dynamics: &LocalDynamics) -> Result<Vec<Complex<f64>>> {
    Ok(dense_eigenvalues(&linearized_matrix(g, dynamics)?))
}

fn shift(j: &Jacobian2, lambda: f64) -> Jacobian2 {
    Jacobian2::new(j.0[0][0] - lambda, j.0[0][1], j.0[1][0], j.0[1][1] - lambda)
}

/// Orthonormal basis of the vectors summing to zero (Helmert columns), `n x (n-1)`.
pub fn helmert_basis(n: usize) -> Vec<Vec<f64>> {
    (1..n)
        .map(|k| {
            let kf = k as f64;
            let s = 1.0 / Float::sqrt(kf * (kf + 1.0));
            let mut col = vec![0.0; n];
            col[..k].iter_mut().for_each(|c| *c = s);
            col[k] = -kf * s;
            col
        })
        .collect()
}

/// Spectrum of the linearisation restricted to perturbations whose patch
/// values sum to zero for each species. For identical patches the uniform
/// perturbations form an invariant subspace evolving under `J` alone, and
/// these `2(n-1)` eigenvalues are the ones the diffusion modes control.
pub fn transverse_spectrum(g: &WeightedGraph, dynamics: &LocalDynamics) -> Result<Vec<Complex<f64>>> {
    if !dynamics.is_uniform() {
        return Err(Error::InvalidParameter("transverse spectrum needs identical patches"));
    }
    let m = linearized_matrix(g, dynamics)?;
    let n = g.node_count();
    if n < 2 {
        return Ok(Vec::new());
    }
    let q = helmert_basis(n);
    let d = 2 * (n - 1);
    // columns of I_2 (x) Q embedded in R^{2n}
    let basis: Vec<Vec<f64>> = (0..2)
        .flat_map(|species| {
            q.iter().map(move |col| {
                let mut v = vec![0.0; 2 * n];
                v[species * n..(species + 1) * n].copy_from_slice(col);
                v
            })
        })
        .collect();
    let mb: Vec<Vec<f64>> = basis.iter().map(|v| m.mul_vec(v)).collect();
    let mut p = SquareMatrix::zeros(d);
    for a in 0..d {
        for b in 0..d {
            p[(a, b)] = crate::linalg::dot(&basis[a], &mb[b]);
        }
    }
    Ok(dense_eigenvalues(&p))
}

pub fn max_real_part(spectrum: &[Complex<f64>]) -> f64 {
    spectrum.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrateOptions {
    pub dt: f64,
    pub steps: usize,
    /// Record every `stride`-th state (the initial state is always recorded).
    pub stride: usize,
    /// After each step, remove the mean deviation from `reference` for each
    /// species. Keeps round-off out of the synchronous mode, which diffusion
    /// cannot damp.
    pub project_synchronous: bool,
}

impl IntegrateOptions {
    pub fn new(dt: f64, horizon: f64) -> Self {
        Self {
            dt,
            steps: Float::round(horizon / dt) as usize,
            stride: 1,
            project_synchronous: false,
        }
    }
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        Self::new(DEFAULT_DT, DEFAULT_HORIZON)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub n: usize,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    /// `max_i |state_i - reference_i|` per recorded state.
    pub max_deviation: Vec<f64>,
    pub reference: Vec<f64>,
    /// Integration stopped at a non-finite state or one beyond [`DIVERGENCE_LIMIT`].
    pub diverged: bool,
}

impl Trajectory {
    pub fn final_deviation(&self) -> f64 {
        self.max_deviation.last().copied().unwrap_or(0.0)
    }
}

fn deviation(state: &[f64], reference: &[f64]) -> f64 {
    state
        .iter()
        .zip(reference)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

/// Classical fixed-step RK4 from `x0`; deviations are measured against the
/// coupled equilibrium.
pub fn integrate(
    g: &WeightedGraph,
    models: &[PatchModel],
    x0: &[f64],
    options: &IntegrateOptions,
) -> Result<Trajectory> {
    let reference = equilibrium(g, models)?.state;
    integrate_around(g, models, x0, &reference, options)
}

/// As [`integrate`] with an explicit reference state.
pub fn integrate_around(
    g: &WeightedGraph,
    models: &[PatchModel],
    x0: &[f64],
    reference: &[f64],
    options: &IntegrateOptions,
) -> Result<Trajectory> {
    let n = check_dims(g, models, x0)?;
    check_dims(g, models, reference)?;
    if !(options.dt > 0.0 && options.dt.is_finite()) {
        return Err(Error::InvalidParameter("dt must be positive"));
    }
    if options.steps == 0 || options.stride == 0 {
        return Err(Error::InvalidParameter("steps and stride must be at least 1"));
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("initial state must be finite"));
    }
    let dim = 2 * n;
    let dt = options.dt;
    let mut state = x0.to_vec();
    let mut traj = Trajectory {
        n,
        times: vec![0.0],
        states: vec![state.clone()],
        max_deviation: vec![deviation(&state, reference)],
        reference: reference.to_vec(),
        diverged: false,
    };
    let (mut k1, mut k2, mut k3, mut k4) = (vec![0.0; dim], vec![0.0; dim], vec![0.0; dim], vec![0.0; dim]);
    let mut tmp = vec![0.0; dim];
    for step in 1..=options.steps {
        rhs_into(g, models, &state, &mut k1);
        axpy(&mut tmp, &state, 0.5 * dt, &k1);
        rhs_into(g, models, &tmp, &mut k2);
        axpy(&mut tmp, &state, 0.5 * dt, &k2);
        rhs_into(g, models, &tmp, &mut k3);
        axpy(&mut tmp, &state, dt, &k3);
        rhs_into(g, models, &tmp, &mut k4);
        for i in 0..dim {
            state[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if options.project_synchronous && n > 0 {
            for species in 0..2 {
                let r = species * n..(species + 1) * n;
                let mean = state[r.clone()]
                    .iter()
                    .zip(&reference[r.clone()])
                    .map(|(s, e)| s - e)
                    .sum::<f64>()
                    / n as f64;
                state[r].iter_mut().for_each(|s| *s -= mean);
            }
        }
        let blown = state.iter().any(|v| !v.is_finite() || v.abs() > DIVERGENCE_LIMIT);
        if blown || step % options.stride == 0 || step == options.steps {
            traj.times.push(step as f64 * dt);
            traj.max_deviation.push(deviation(&state, reference));
            traj.states.push(state.clone());
        }
        if blown {
            traj.diverged = true;
            break;
        }
    }
    Ok(traj)
}

fn axpy(out: &mut [f64], x: &[f64], a: f64, y: &[f64]) {
    for ((o, xi), yi) in out.iter_mut().zip(x).zip(y) {
        *o = xi + a * yi;
    }
}

/// `reference` plus uniform noise of the given amplitude. With `zero_sum`
/// the noise of each species sums to zero, leaving the synchronous mode
/// unexcited.
pub fn perturbed_state(reference: &[f64], amplitude: f64, seed: u64, zero_sum: bool) -> Vec<f64> {
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut noise: Vec<f64> = reference
        .iter()
        .map(|_| amplitude * (2.0 * rng.random::<f64>() - 1.0))
        .collect();
    let n = reference.len() / 2;
    if zero_sum && n > 0 {
        for chunk in noise.chunks_mut(n) {
            let mean = chunk.iter().sum::<f64>() / n as f64;
            chunk.iter_mut().for_each(|v| *v -= mean);
        }
    }
    reference.iter().zip(noise).map(|(r, d)| r + d).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;

    fn focus() -> Jacobian2 {
        Jacobian2::new(3.0, -5.0, 5.0, 3.0)
    }

    fn g56() -> WeightedGraph {
        WeightedGraph::from_edge_list(
            5,
            &[
                (0, 1, 3.0),
                (1, 2, 2.0),
                (2, 3, 3.0),
                (3, 4, 5.0),
                (4, 0, 2.0),
                (4, 1, 1.0),
            ],
        )
        .unwrap()
    }

    fn rm() -> RosenzweigParams {
        RosenzweigParams {
            r: 1.0,
            k: 10.0,
            a: 1.0,
            h: 0.5,
            e: 0.5,
            m: 0.1,
        }
    }

    #[test]
    fn coupling_sum() {
        let g = WeightedGraph::from_edge_list(2, &[(0, 1, 2.0)]).unwrap();
        let models = [PatchModel::linear(Jacobian2::new(0.0, 0.0, 0.0, 0.0)); 2];
        assert_eq!(
            rhs(&g, &models, &[1.0, 3.0, 0.0, 0.0]).unwrap(),
            vec![4.0, -4.0, 0.0, 0.0]
        );
    }

    #[test]
    fn rhs_matches_matrix_form() {
        let g = g56();
        let models = [PatchModel::linear(focus()); 5];
        let s: Vec<f64> = (0..10).map(|i| (i as f64 * 0.7).sin()).collect();
        let a = linearized_matrix(&g, &local_dynamics(&models).unwrap()).unwrap();
        let direct = rhs(&g, &models, &s).unwrap();
        for (x, y) in direct.iter().zip(a.mul_vec(&s)) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn equilibrium_is_fixed() {
        let models = [PatchModel::rosenzweig(rm()).unwrap(); 5];
        let eq = equilibrium(&g56(), &models).unwrap();
        assert!(!eq.approximate);
        assert!(rhs(&g56(), &models, &eq.state).unwrap().iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn heterogeneous_equilibrium_by_newton() {
        let mut p2 = rm();
        p2.m = 0.12;
        let models = [
            PatchModel::rosenzweig(rm()).unwrap(),
            PatchModel::rosenzweig(p2).unwrap(),
        ];
        let g = WeightedGraph::from_edge_list(2, &[(0, 1, 0.5)]).unwrap();
        let eq = equilibrium(&g, &models).unwrap();
        assert!(eq.approximate);
        assert!(rhs(&g, &models, &eq.state).unwrap().iter().all(|v| v.abs() < 1e-10));
    }

    #[test]
    fn rosenzweig_jacobian_matches_finite_differences() {
        let p = rm();
        let [x, y] = p.equilibrium().unwrap();
        let j = p.jacobian_at(x, y);
        let h = 1e-6;
        let fx = p.reaction(x + h, y);
        let fx0 = p.reaction(x - h, y);
        let fy = p.reaction(x, y + h);
        let fy0 = p.reaction(x, y - h);
        assert!((j.0[0][0] - (fx[0] - fx0[0]) / (2.0 * h)).abs() < 1e-6);
        assert!((j.0[1][0] - (fx[1] - fx0[1]) / (2.0 * h)).abs() < 1e-6);
        assert!((j.0[0][1] - (fy[0] - fy0[0]) / (2.0 * h)).abs() < 1e-6);
        assert!((j.0[1][1] - (fy[1] - fy0[1]) / (2.0 * h)).abs() < 1e-6);
        // paradox of enrichment regime: unstable focus
        assert!(j.trace() > 0.0 && j.discriminant() < 0.0);
    }

    #[test]
    fn rosenzweig_rejects_bad_parameters() {
        let mut p = rm();
        p.m = 1.0;
        assert!(PatchModel::rosenzweig(p).is_err());
        p = rm();
        p.k = -1.0;
        assert!(PatchModel::rosenzweig(p).is_err());
    }

    #[test]
    fn per_mode_matches_dense() {
        let d = LocalDynamics::uniform(5, focus()).unwrap();
        let a = linearized_spectrum(&g56(), &d).unwrap();
        let b = linearized_spectrum_dense(&g56(), &d).unwrap();
        assert_eq!(a.len(), 10);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-8, "{x} vs {y}");
        }
    }

    #[test]
    fn mode_roots() {
        let g = WeightedGraph::from_edge_list(2, &[(0, 1, 3.625 / 2.0)]).unwrap();
        let d = LocalDynamics::uniform(2, focus()).unwrap();
        let s = linearized_spectrum(&g, &d).unwrap();
        // lambda = 3.625 gives Re sigma = 3 - 3.625
        assert!(s
            .iter()
            .any(|z| (z.re + 0.625).abs() < 1e-12 && (z.im.abs() - 5.0).abs() < 1e-12));
        // the uniform mode keeps the patch eigenvalues 3 +- 5i
        assert!(s.iter().any(|z| (z.re - 3.0).abs() < 1e-12));
        let t = transverse_spectrum(&g, &d).unwrap();
        assert_eq!(t.len(), 2);
        assert!((max_real_part(&t) + 0.625).abs() < 1e-9);
    }

    #[test]
    fn edgeless_spectrum_is_patch_spectra() {
        let g = WeightedGraph::from_edge_list(3, &[]).unwrap();
        let d = LocalDynamics::new(vec![focus(), Jacobian2::new(-1.0, 0.0, 0.0, -2.0), focus()]).unwrap();
        let s = linearized_spectrum(&g, &d).unwrap();
        let re: Vec<f64> = s.iter().map(|z| z.re).collect();
        for (x, y) in re.iter().zip([3.0, 3.0, 3.0, 3.0, -1.0, -2.0]) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn helmert_is_orthonormal() {
        let q = helmert_basis(5);
        for (a, qa) in q.iter().enumerate() {
            assert!(qa.iter().sum::<f64>().abs() < 1e-12);
            for (b, qb) in q.iter().enumerate() {
                let d = crate::linalg::dot(qa, qb);
                assert!((d - if a == b { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn stable_network_decays() {
        let g = g56();
        let models = [PatchModel::linear(focus()); 5];
        let x0 = perturbed_state(&[0.0; 10], 1e-3, 1, true);
        let opts = IntegrateOptions {
            project_synchronous: true,
            stride: 1000,
            ..IntegrateOptions::default()
        };
        let t = integrate(&g, &models, &x0, &opts).unwrap();
        assert!(!t.diverged);
        assert!((t.times.last().unwrap() - 50.0).abs() < 1e-9);
        assert!(t.final_deviation() < 1e-4);
    }

    #[test]
    fn isolated_unstable_focus_grows() {
        let g = WeightedGraph::from_edge_list(1, &[]).unwrap();
        let models = [PatchModel::linear(focus())];
        let opts = IntegrateOptions::new(1e-3, 2.0);
        let t = integrate(&g, &models, &[1e-3, 0.0], &opts).unwrap();
        let growth = t.final_deviation() / t.max_deviation[0];
        assert!(growth >= Float::exp(3.0f64 * 2.0) / 2.0);
    }

    #[test]
    fn zero_dynamics_constant() {
        let g = WeightedGraph::from_edge_list(3, &[]).unwrap();
        let models = [PatchModel::linear(Jacobian2::new(0.0, 0.0, 0.0, 0.0)); 3];
        let x0 = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let t = integrate(&g, &models, &x0, &IntegrateOptions::new(0.1, 1.0)).unwrap();
        assert!(t.states.iter().all(|s| s == &x0));
    }

    #[test]
    fn divergence_detected() {
        let g = WeightedGraph::from_edge_list(1, &[]).unwrap();
        let models = [PatchModel::linear(Jacobian2::new(50.0, 0.0, 0.0, 50.0))];
        let t = integrate(&g, &models, &[1.0, 1.0], &IntegrateOptions::new(1e-2, 100.0)).unwrap();
        assert!(t.diverged);
        assert!(t.times.len() < 10_001);
    }

    #[test]
    fn integrate_rejects_bad_options() {
        let g = families::path(2);
        let models = [PatchModel::linear(focus()); 2];
        let bad = IntegrateOptions {
            dt: 0.0,
            ..IntegrateOptions::default()
        };
        assert!(integrate(&g, &models, &[0.0; 4], &bad).is_err());
        assert!(integrate(&g, &models, &[0.0; 3], &IntegrateOptions::default()).is_err());
    }

    #[test]
    fn zero_sum_perturbation() {
        let p = perturbed_state(&[1.0, 1.0, 1.0, 2.0, 2.0, 2.0], 0.1, 9, true);
        assert!((p[..3].iter().sum::<f64>() - 3.0).abs() < 1e-12);
        assert!((p[3..].iter().sum::<f64>() - 6.0).abs() < 1e-12);
    }
}
