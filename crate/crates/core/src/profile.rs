//! The one-dimensional layer profile: Newton solution of
//! U'' + (n-1) tanh(t) U' - f(U) = 0 with U(+-T) = +-1, exponential decay
//! fits, the bottom eigenvalue of the linearized operator on the weighted
//! line, the radial generalized eigenfunction phi_delta, and the
//! supersolution certificates built from U' and exp(-mu |t|).

use crate::error::{Error, Result};
use crate::potential::{spectral_rates, validate_potential, DoubleWellPotential, SpectralRates};
use serde::Serialize;

/// Uniform symmetric grid t_i = -T + i h with a node at t = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileGrid {
    half_width: f64,
    spacing: f64,
    n_nodes: usize,
}

impl ProfileGrid {
    pub fn new(half_width: f64, spacing: f64) -> Result<Self> {
        if half_width <= 0.0 || spacing <= 0.0 {
            return Err(Error::Precondition(format!(
                "grid needs T > 0 and h > 0, got T = {half_width}, h = {spacing}"
            )));
        }
        let mut m = (2.0 * half_width / spacing).round() as usize;
        if m % 2 == 1 {
            m += 1;
        }
        if m < 8 {
            return Err(Error::Precondition(format!(
                "grid with T = {half_width}, h = {spacing} has too few nodes"
            )));
        }
        let spacing = 2.0 * half_width / m as f64;
        Ok(Self {
            half_width,
            spacing,
            n_nodes: m + 1,
        })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.n_nodes
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn node(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.spacing
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_nodes).map(|i| self.node(i))
    }
}

/// Solves the tridiagonal system (sub, diag, sup) x = rhs by the Thomas
/// algorithm. All bands have the length of `rhs`; sub[0] and sup[last] are
/// ignored.
fn thomas_solve(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = rhs.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - sub[i] * c[i - 1];
        c[i] = sup[i] / m;
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / m;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

/// Discretized layer solution together with its derivative samples.
#[derive(Debug, Clone)]
pub struct Profile {
    grid: ProfileGrid,
    u: Vec<f64>,
    du: Vec<f64>,
    n: usize,
    potential: DoubleWellPotential,
    residual_sup: f64,
}

impl Profile {
    pub fn grid(&self) -> &ProfileGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.u
    }

    pub fn derivative_values(&self) -> &[f64] {
        &self.du
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn potential(&self) -> &DoubleWellPotential {
        &self.potential
    }

    pub fn residual_sup(&self) -> f64 {
        self.residual_sup
    }

    /// Discrete residual of the layer ODE at every node (zero at the ends).
    pub fn residuals(&self) -> Vec<f64> {
        let h = self.grid.spacing();
        let nm1 = self.n as f64 - 1.0;
        let mut r = vec![0.0; self.u.len()];
        for i in 1..self.u.len() - 1 {
            let t = self.grid.node(i);
            r[i] = (self.u[i + 1] - 2.0 * self.u[i] + self.u[i - 1]) / (h * h)
                + nm1 * t.tanh() * (self.u[i + 1] - self.u[i - 1]) / (2.0 * h)
                - self.potential.nonlinearity(self.u[i]);
        }
        r
    }

    /// Evaluates U at an arbitrary coordinate by cubic Hermite interpolation;
    /// beyond the grid the wells are exact to O(e^{-beta T}) so +-1 is
    /// returned.
    pub fn eval(&self, t: f64) -> f64 {
        let big_t = self.grid.half_width();
        if t <= -big_t {
            return -1.0;
        }
        if t >= big_t {
            return 1.0;
        }
        let h = self.grid.spacing();
        let s = (t + big_t) / h;
        let i = (s.floor() as usize).min(self.u.len() - 2);
        let x = s - i as f64;
        let (u0, u1) = (self.u[i], self.u[i + 1]);
        let (m0, m1) = (self.du[i] * h, self.du[i + 1] * h);
        let x2 = x * x;
        let x3 = x2 * x;
        (2.0 * x3 - 3.0 * x2 + 1.0) * u0
            + (x3 - 2.0 * x2 + x) * m0
            + (-2.0 * x3 + 3.0 * x2) * u1
            + (x3 - x2) * m1
    }

    /// Evaluates U' by differentiating the Hermite interpolant; zero beyond
    /// the grid.
    pub fn eval_derivative(&self, t: f64) -> f64 {
        let big_t = self.grid.half_width();
        if t.abs() >= big_t {
            return 0.0;
        }
        let h = self.grid.spacing();
        let s = (t + big_t) / h;
        let i = (s.floor() as usize).min(self.u.len() - 2);
        let x = s - i as f64;
        let (u0, u1) = (self.u[i], self.u[i + 1]);
        let (m0, m1) = (self.du[i] * h, self.du[i + 1] * h);
        let x2 = x * x;
        ((6.0 * x2 - 6.0 * x) * u0
            + (3.0 * x2 - 4.0 * x + 1.0) * m0
            + (-6.0 * x2 + 6.0 * x) * u1
            + (3.0 * x2 - 2.0 * x) * m1)
            / h
    }
}

const NEWTON_CAP: usize = 40;

/// Newton solution of the layer ODE with Dirichlet data U(+-T) = +-1.
///
/// The initial guess tanh(beta t / 2) has the correct decay rates and lies in
/// the contraction basin for every validated potential tried.
pub fn solve_profile(
    p: &DoubleWellPotential,
    n: usize,
    half_width: f64,
    spacing: f64,
    tol: f64,
) -> Result<Profile> {
    validate_potential(p, 601)?;
    let rates = spectral_rates(p, n)?;
    if half_width < 8.0 / rates.beta {
        return Err(Error::Precondition(format!(
            "T = {half_width} below 8/beta = {}; truncation error would exceed tol",
            8.0 / rates.beta
        )));
    }
    let max_fpp = (0..=300)
        .map(|k| -1.5 + k as f64 * 0.01)
        .map(|s| p.nonlinearity_second(s).abs())
        .fold(0.0, f64::max);
    if spacing * spacing * max_fpp >= 1.0 {
        return Err(Error::Precondition(format!(
            "h = {spacing} too coarse: h^2 max|f''| = {} >= 1",
            spacing * spacing * max_fpp
        )));
    }
    let grid = ProfileGrid::new(half_width, spacing)?;
    let m = grid.len() - 1;
    let h = grid.spacing();
    let nm1 = n as f64 - 1.0;

    let mut u: Vec<f64> = grid.nodes().map(|t| (rates.beta * t / 2.0).tanh()).collect();
    u[0] = -1.0;
    u[m] = 1.0;

    let residual = |u: &[f64]| -> (Vec<f64>, f64) {
        let mut r = vec![0.0; m - 1];
        let mut sup = 0.0_f64;
        for i in 1..m {
            let t = grid.node(i);
            let val = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h)
                + nm1 * t.tanh() * (u[i + 1] - u[i - 1]) / (2.0 * h)
                - p.nonlinearity(u[i]);
            r[i - 1] = val;
            sup = sup.max(val.abs());
        }
        (r, sup)
    };

    let mut last_sup = f64::INFINITY;
    let mut converged = false;
    for iter in 0..NEWTON_CAP {
        let (r, sup) = residual(&u);
        if sup <= tol {
            converged = true;
            break;
        }
        if !sup.is_finite() || sup > 1e8 {
            return Err(Error::NewtonDivergence {
                iterations: iter,
                residual: sup,
            });
        }
        last_sup = sup;
        let mut sub = vec![0.0; m - 1];
        let mut diag = vec![0.0; m - 1];
        let mut supd = vec![0.0; m - 1];
        for i in 1..m {
            let a = nm1 * grid.node(i).tanh() / (2.0 * h);
            sub[i - 1] = 1.0 / (h * h) - a;
            diag[i - 1] = -2.0 / (h * h) - p.nonlinearity_prime(u[i]);
            supd[i - 1] = 1.0 / (h * h) + a;
        }
        let rhs: Vec<f64> = r.iter().map(|v| -v).collect();
        let delta = thomas_solve(&sub, &diag, &supd, &rhs);
        for i in 1..m {
            u[i] += delta[i - 1];
        }
    }
    if !converged {
        let (_, sup) = residual(&u);
        if sup > tol {
            return Err(Error::NewtonDivergence {
                iterations: NEWTON_CAP,
                residual: sup.min(last_sup),
            });
        }
    }

    for (i, v) in u.iter_mut().enumerate().take(m).skip(1) {
        if v.abs() > 1.0 + 1e-12 {
            return Err(Error::Precondition(format!(
                "interior profile value {v} at t = {} escaped [-1, 1]",
                grid.node(i)
            )));
        }
        // Round-off in the saturated tail may overshoot the well by an ulp.
        *v = v.clamp(-1.0, 1.0);
    }

    let mut du = vec![0.0; m + 1];
    for i in 1..m {
        du[i] = (u[i + 1] - u[i - 1]) / (2.0 * h);
    }
    du[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
    du[m] = (3.0 * u[m] - 4.0 * u[m - 1] + u[m - 2]) / (2.0 * h);

    // Strict monotonicity holds in exact arithmetic; in f64 the far tail
    // saturates at +-1 once 1 - |U| drops below the representable spacing,
    // so the check skips saturated nodes.
    let (min_du, at) = du
        .iter()
        .enumerate()
        .filter(|&(i, _)| 1.0 - u[i].abs() > 1e-13)
        .map(|(i, &d)| (d, grid.node(i)))
        .fold((f64::INFINITY, 0.0), |acc, (d, t)| {
            if d < acc.0 {
                (d, t)
            } else {
                acc
            }
        });
    if min_du <= 0.0 {
        return Err(Error::MonotonicityFailure {
            min_derivative: min_du,
            at,
        });
    }

    let (_, sup) = residual(&u);
    Ok(Profile {
        grid,
        u,
        du,
        n,
        potential: p.clone(),
        residual_sup: sup,
    })
}

/// Exponential tail fit of the profile on the window [0.6 T, 0.9 T].
#[derive(Debug, Clone, Serialize)]
pub struct DecayEstimate {
    pub beta_hat_plus: f64,
    pub beta_hat_minus: f64,
    pub c_hat_plus: f64,
    pub c_hat_minus: f64,
    pub window_lo: f64,
    pub window_hi: f64,
    pub fit_residual_plus: f64,
    pub fit_residual_minus: f64,
}

const FIT_MIN_NODES: usize = 20;

fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    let rms = (x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let e = b - (intercept + slope * a);
            e * e
        })
        .sum::<f64>()
        / n)
        .sqrt();
    (slope, intercept, rms)
}

/// Fits log(1 -+ U) against |t| on the default window, one side at a time.
pub fn estimate_decay(prof: &Profile, _rates: &SpectralRates) -> Result<DecayEstimate> {
    let t_max = prof.grid().half_width();
    let lo = 0.6 * t_max;
    let hi = 0.9 * t_max;

    let mut xp = Vec::new();
    let mut yp = Vec::new();
    let mut xm = Vec::new();
    let mut ym = Vec::new();
    for (i, t) in prof.grid().nodes().enumerate() {
        if t >= lo && t <= hi {
            xp.push(t);
            yp.push((1.0 - prof.values()[i]).ln());
        }
        if t <= -lo && t >= -hi {
            xm.push(-t);
            ym.push((1.0 + prof.values()[i]).ln());
        }
    }
    if xp.len() < FIT_MIN_NODES || xm.len() < FIT_MIN_NODES {
        return Err(Error::WindowTooSmall {
            nodes: xp.len().min(xm.len()),
            required: FIT_MIN_NODES,
        });
    }
    let (sp, ip, rp) = linear_fit(&xp, &yp);
    let (sm, im, rm) = linear_fit(&xm, &ym);
    Ok(DecayEstimate {
        beta_hat_plus: -sp,
        beta_hat_minus: -sm,
        c_hat_plus: ip.exp(),
        c_hat_minus: im.exp(),
        window_lo: lo,
        window_hi: hi,
        fit_residual_plus: rp,
        fit_residual_minus: rm,
    })
}

/// Symmetrized potential of -L0 after conjugating by cosh(t)^{(n-1)/2}:
/// V(t) = f'(U(t)) + b^2 tanh^2 t + b sech^2 t with b = (n-1)/2.
fn symmetrized_potential(prof: &Profile, shift: f64) -> Vec<f64> {
    let b = (prof.dimension() as f64 - 1.0) / 2.0;
    prof.grid()
        .nodes()
        .enumerate()
        .map(|(i, t)| {
            let sech2 = 1.0 / (t.cosh() * t.cosh());
            prof.potential().nonlinearity_prime(prof.values()[i])
                + b * b * t.tanh() * t.tanh()
                + b * sech2
                + shift
        })
        .collect()
}

/// Bottom eigenvalue of -L0 on L^2((cosh t)^{n-1} dt) with Dirichlet
/// truncation, plus the weighted-normalized eigenvector.
pub fn lowest_eigenvalue_1d(prof: &Profile) -> Result<(f64, Vec<f64>)> {
    lowest_eigenvalue_1d_shifted(prof, 0.0)
}

/// Same with f'(U) replaced by f'(U) + shift; the eigenvalue shifts exactly.
pub fn lowest_eigenvalue_1d_shifted(prof: &Profile, shift: f64) -> Result<(f64, Vec<f64>)> {
    let h = prof.grid().spacing();
    let m = prof.grid().len() - 1;
    let v = symmetrized_potential(prof, shift);
    let dim = m - 1;
    let diag: Vec<f64> = (1..m).map(|i| 2.0 / (h * h) + v[i]).collect();
    let off = -1.0 / (h * h);

    let apply = |x: &[f64]| -> Vec<f64> {
        let mut y = vec![0.0; dim];
        for i in 0..dim {
            let mut acc = diag[i] * x[i];
            if i > 0 {
                acc += off * x[i - 1];
            }
            if i + 1 < dim {
                acc += off * x[i + 1];
            }
            y[i] = acc;
        }
        y
    };

    let sub = vec![off; dim];
    let sup = vec![off; dim];
    let mut x: Vec<f64> = (1..m)
        .map(|i| 1.0 / prof.grid().node(i).cosh())
        .collect();
    let norm = |v: &[f64]| (v.iter().map(|a| a * a).sum::<f64>()).sqrt();
    let nx = norm(&x);
    x.iter_mut().for_each(|a| *a /= nx);

    let mut lambda = 0.0;
    let mut prev = f64::INFINITY;
    let cap = 2000;
    for iter in 0..cap {
        let y = thomas_solve(&sub, &diag, &sup, &x);
        let ny = norm(&y);
        x = y.iter().map(|a| a / ny).collect();
        let ax = apply(&x);
        lambda = x.iter().zip(&ax).map(|(a, b)| a * b).sum::<f64>();
        let resid = ax
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - lambda * b).powi(2))
            .sum::<f64>()
            .sqrt();
        if (lambda - prev).abs() <= 1e-14 * lambda.abs().max(1.0) && resid <= 1e-11 {
            break;
        }
        if iter == cap - 1 {
            return Err(Error::IterationStall {
                iterations: cap,
                change: (lambda - prev).abs(),
            });
        }
        prev = lambda;
    }

    // Back-transform to the weighted variables and normalize there.
    let b = (prof.dimension() as f64 - 1.0) / 2.0;
    let mut phi = vec![0.0; m + 1];
    for i in 1..m {
        phi[i] = x[i - 1] / prof.grid().node(i).cosh().powf(b);
    }
    let wnorm = (phi
        .iter()
        .enumerate()
        .map(|(i, p)| {
            p * p * prof.grid().node(i).cosh().powf(2.0 * b) * h
        })
        .sum::<f64>())
    .sqrt();
    phi.iter_mut().for_each(|p| *p /= wnorm);
    Ok((lambda, phi))
}

/// Samples of the radial generalized eigenfunction on [0, R].
#[derive(Debug, Clone)]
pub struct PhiDelta {
    pub r: Vec<f64>,
    pub phi: Vec<f64>,
    pub delta: f64,
    pub n: usize,
}

impl PhiDelta {
    pub fn eval(&self, r: f64) -> f64 {
        let h = self.r[1] - self.r[0];
        let s = (r / h).max(0.0);
        let i = (s.floor() as usize).min(self.phi.len() - 2);
        let x = s - i as f64;
        self.phi[i] * (1.0 - x) + self.phi[i + 1] * x
    }
}

/// Positive radial solution of
/// phi'' + (n-2) coth(r) phi' + delta (n-2-delta) phi = 0, phi(0) = 1.
pub fn compute_phi_delta(n: usize, delta: f64, r_max: f64, h: f64) -> Result<PhiDelta> {
    if n < 3 {
        return Err(Error::Precondition(format!(
            "phi_delta needs n >= 3, got n = {n}"
        )));
    }
    let max = (n as f64 - 2.0) / 2.0;
    if delta <= 0.0 || delta >= max {
        return Err(Error::ExponentOutOfRange { delta, max, n });
    }
    if r_max <= 2.0 * h || h <= 0.0 {
        return Err(Error::Precondition(format!(
            "invalid radial grid: R = {r_max}, h = {h}"
        )));
    }
    let lam = delta * (n as f64 - 2.0 - delta);
    let nm2 = n as f64 - 2.0;

    // Series start around the coordinate singularity at r = 0:
    // phi = 1 + c2 r^2 + c4 r^4 + O(r^6).
    let c2 = -lam / (2.0 * (n as f64 - 1.0));
    let c4 = -(lam * c2 + 2.0 * nm2 * c2 / 3.0) / (12.0 + 4.0 * nm2);

    let steps = (r_max / h).ceil() as usize;
    let mut r_grid = Vec::with_capacity(steps + 1);
    let mut phi = Vec::with_capacity(steps + 1);
    phi.push(1.0);
    r_grid.push(0.0);

    let rhs = |r: f64, p: f64, dp: f64| -> f64 {
        if r < 1e-12 {
            // coth-singularity limit: phi''(0) = -lam phi(0) / (n-1)
            -lam * p / (n as f64 - 1.0)
        } else {
            -nm2 / r.tanh() * dp - lam * p
        }
    };

    // First node from the series, then classic RK4.
    let r1 = h;
    let mut p = 1.0 + c2 * r1 * r1 + c4 * r1.powi(4);
    let mut dp = 2.0 * c2 * r1 + 4.0 * c4 * r1.powi(3);
    r_grid.push(r1);
    phi.push(p);
    for k in 1..steps {
        let r = k as f64 * h;
        let (k1p, k1d) = (dp, rhs(r, p, dp));
        let (k2p, k2d) = (
            dp + 0.5 * h * k1d,
            rhs(r + 0.5 * h, p + 0.5 * h * k1p, dp + 0.5 * h * k1d),
        );
        let (k3p, k3d) = (
            dp + 0.5 * h * k2d,
            rhs(r + 0.5 * h, p + 0.5 * h * k2p, dp + 0.5 * h * k2d),
        );
        let (k4p, k4d) = (dp + h * k3d, rhs(r + h, p + h * k3p, dp + h * k3d));
        p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        dp += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
        r_grid.push((k + 1) as f64 * h);
        phi.push(p);
    }

    if phi.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::Precondition(
            "phi_delta lost positivity; reduce R or h".into(),
        ));
    }
    Ok(PhiDelta {
        r: r_grid,
        phi,
        delta,
        n,
    })
}

/// Certificate for the pinched supersolution candidate.
#[derive(Debug, Clone, Serialize)]
pub struct SupersolutionReport {
    pub n: usize,
    pub mu: f64,
    pub delta: Option<f64>,
    pub epsilon: f64,
    /// Prefactor of the tail branch A e^{-mu |t|}.
    pub tail_scale: f64,
    /// Lower pinching constant: min of v / (sech(mu t) rho^delta).
    pub a1: f64,
    /// Upper pinching constant: max of the same ratio.
    pub a1_prime: f64,
    /// Largest value of L0 v / weight outside the excluded band (must be < 0).
    pub worst_ratio: f64,
    /// Grid points excluded around the min-interface.
    pub excluded: usize,
    /// Points evaluated.
    pub evaluated: usize,
}

/// Evaluates the candidate v = min{(U' + eps) phi_delta, A e^{-mu |t|}}
/// (phi_delta absent for n = 2) branch by branch and certifies
/// L0 v <= -C < 0 away from the min-interface band of width 2h.
///
/// The tail prefactor A keeps the derivative branch active through the layer
/// core, so the branches cross only where the well curvature is already
/// positive; for the quartic at n = 2 the derivative branch peaks at
/// U'(0) = 1, which would otherwise lose the min to e^{-mu |t|} right at the
/// core.  Scaling one branch changes none of the certified properties.
///
/// Each branch is evaluated in closed form: L0 U' = -(n-1) sech^2(t) U' from
/// differentiating the ODE, the eigenvalue identity for phi_delta, and the
/// exact t-derivatives of e^{-mu |t|}.
pub fn check_supersolution(
    prof: &Profile,
    rates: &SpectralRates,
    mu: f64,
    delta: Option<f64>,
    epsilon: f64,
) -> Result<SupersolutionReport> {
    if mu <= 0.0 {
        return Err(Error::Precondition(format!("mu = {mu} must be positive")));
    }
    if epsilon <= 0.0 {
        return Err(Error::Precondition(format!(
            "epsilon = {epsilon} must be positive"
        )));
    }
    let n = prof.dimension();
    let nm1 = n as f64 - 1.0;
    let phi_delta = if n >= 3 {
        let d = delta.ok_or_else(|| {
            Error::Precondition("delta required for n >= 3".into())
        })?;
        Some(compute_phi_delta(n, d, 12.0, 0.01)?)
    } else {
        None
    };
    let lam = phi_delta
        .as_ref()
        .map(|pd| pd.delta * (n as f64 - 2.0 - pd.delta))
        .unwrap_or(0.0);

    let m = prof.grid().len() - 1;
    let h = prof.grid().spacing();
    let r_samples: Vec<(f64, f64)> = match &phi_delta {
        Some(pd) => pd
            .r
            .iter()
            .zip(&pd.phi)
            .step_by(4)
            .map(|(&r, &p)| (r, p))
            .collect(),
        None => vec![(0.0, 1.0)],
    };

    // Core width: outside |t| >= t_core the well curvature f'(U) stays above
    // half its limiting value, so the tail branch is a supersolution there.
    let gamma_floor = rates.gamma_minus.min(rates.gamma_plus) / 2.0;
    let mut t_core = 0.0_f64;
    for (i, t) in prof.grid().nodes().enumerate() {
        if prof.potential().nonlinearity_prime(prof.values()[i]) < gamma_floor {
            t_core = t_core.max(t.abs());
        }
    }
    let max_du = prof
        .derivative_values()
        .iter()
        .cloned()
        .fold(0.0, f64::max);
    let tail_scale = (max_du + epsilon) * (mu * (t_core + 0.5)).exp();

    // Branch values and branch L0 at one (t-index, r-sample).
    let branch = |i: usize, phi_r: f64| -> (f64, f64, f64, f64) {
        let t = prof.grid().node(i);
        let sech2 = 1.0 / (t.cosh() * t.cosh());
        let fp = prof.potential().nonlinearity_prime(prof.values()[i]);
        let up = prof.derivative_values()[i];
        let v1 = (up + epsilon) * phi_r;
        let lv1 = (-nm1 * sech2 * up - epsilon * fp - lam * sech2 * (up + epsilon)) * phi_r;
        let v2 = tail_scale * (-mu * t.abs()).exp();
        let lv2 = (mu * mu - nm1 * mu * t.abs().tanh() - fp) * v2;
        (v1, lv1, v2, lv2)
    };

    let mut a1 = f64::INFINITY;
    let mut a1p = 0.0_f64;
    let mut worst = f64::NEG_INFINITY;
    let mut worst_at = (0.0, 0.0);
    let mut excluded = 0usize;
    let mut evaluated = 0usize;

    for (k, &(r, phi_r)) in r_samples.iter().enumerate() {
        let rho_d = match &phi_delta {
            Some(pd) => (1.0 / r.cosh()).powf(pd.delta),
            None => 1.0,
        };
        for i in 1..m {
            let t = prof.grid().node(i);
            let weight = (1.0 / (mu * t).cosh()) * rho_d;
            let (v1, lv1, v2, lv2) = branch(i, phi_r);
            let v = v1.min(v2);
            let ratio_v = v / weight;
            a1 = a1.min(ratio_v);
            a1p = a1p.max(ratio_v);

            // Exclude a band of width 2h (and two r-samples) around the
            // crossing locus of the two branches.
            let sign_here = v1 - v2;
            let mut near_interface = false;
            for di in [-1_i64, 1] {
                let j = i as i64 + di;
                if j >= 1 && (j as usize) < m {
                    let (w1, _, w2, _) = branch(j as usize, phi_r);
                    if (w1 - w2) * sign_here <= 0.0 {
                        near_interface = true;
                    }
                }
            }
            if !near_interface && r_samples.len() > 1 {
                for dk in [-1_i64, 1] {
                    let kk = k as i64 + dk;
                    if kk >= 0 && (kk as usize) < r_samples.len() {
                        let (_, pr) = r_samples[kk as usize];
                        let (w1, _, w2, _) = branch(i, pr);
                        if (w1 - w2) * sign_here <= 0.0 {
                            near_interface = true;
                        }
                    }
                }
            }
            // The kink of |t| sits at t = 0; exclude it when branch 2 is
            // active there.
            if v2 <= v1 && t.abs() < 1.5 * h {
                near_interface = true;
            }
            if near_interface {
                excluded += 1;
                continue;
            }
            evaluated += 1;
            let lv = if v1 <= v2 { lv1 } else { lv2 };
            let ratio = lv / weight;
            if ratio > worst {
                worst = ratio;
                worst_at = (t, r);
            }
        }
    }

    let report = SupersolutionReport {
        n,
        mu,
        delta: phi_delta.as_ref().map(|pd| pd.delta).or(delta),
        epsilon,
        tail_scale,
        a1,
        a1_prime: a1p,
        worst_ratio: worst,
        excluded,
        evaluated,
    };
    if worst >= 0.0 {
        return Err(Error::SupersolutionViolation {
            worst,
            at_t: worst_at.0,
            at_r: worst_at.1,
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::DoubleWellPotential;

    fn quartic_profile(n: usize, t: f64, h: f64) -> Profile {
        solve_profile(&DoubleWellPotential::quartic(), n, t, h, 1e-11).unwrap()
    }

    fn asymmetric() -> DoubleWellPotential {
        // (1-u^2)^2 (0.25 + 0.06 u): gamma_- = 1.52, gamma_+ = 2.48
        DoubleWellPotential::polynomial(vec![0.25, 0.06, -0.5, -0.12, 0.25, 0.06])
    }

    #[test]
    fn quartic_profile_odd_symmetry() {
        let prof = quartic_profile(2, 12.0, 0.005);
        let m = prof.grid().len() - 1;
        assert!(prof.values()[m / 2].abs() < 1e-9);
        for i in 0..=m {
            let v = prof.values()[i];
            let w = prof.values()[m - i];
            assert!((v + w).abs() < 1e-9, "asymmetry at node {i}");
        }
        assert!(prof.residual_sup() <= 1e-11);
    }

    #[test]
    fn profile_monotone_and_bounded() {
        let prof = quartic_profile(2, 12.0, 0.005);
        let min_du = prof
            .derivative_values()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        assert!(min_du > 0.0);
        for w in prof.values().windows(2) {
            assert!(w[1] > w[0]);
        }
    }

    #[test]
    fn truncation_stability() {
        let a = quartic_profile(2, 10.0, 0.01);
        let b = quartic_profile(2, 20.0, 0.01);
        let mut worst = 0.0_f64;
        for (i, t) in a.grid().nodes().enumerate() {
            if t.abs() <= 8.0 {
                worst = worst.max((a.values()[i] - b.eval(t)).abs());
            }
        }
        assert!(worst < 1e-8, "worst = {worst:e}");
    }

    #[test]
    fn derivative_identity_second_order() {
        // L0 U' = -(n-1) sech^2 t U' discretely, O(h^2) by halving h.
        let err = |h: f64| -> f64 {
            let prof = quartic_profile(2, 10.0, h);
            let grid = prof.grid();
            let hh = grid.spacing();
            let m = grid.len() - 1;
            let du = prof.derivative_values();
            let mut worst = 0.0_f64;
            for i in 2..m - 1 {
                let t = grid.node(i);
                let lhs = (du[i + 1] - 2.0 * du[i] + du[i - 1]) / (hh * hh)
                    + t.tanh() * (du[i + 1] - du[i - 1]) / (2.0 * hh)
                    - prof
                        .potential()
                        .nonlinearity_prime(prof.values()[i])
                        * du[i];
                let rhs = -du[i] / (t.cosh() * t.cosh());
                worst = worst.max((lhs - rhs).abs());
            }
            worst
        };
        let e1 = err(0.02);
        let e2 = err(0.01);
        let order = (e1 / e2).log2();
        assert!(order > 1.6, "observed order {order}, errors {e1:e}, {e2:e}");
    }

    #[test]
    fn weighted_form_identity() {
        // Quadratic form vs weighted inner product against -L0, O(h^2).
        let form_gap = |h: f64| -> f64 {
            let prof = quartic_profile(2, 10.0, h);
            let grid = prof.grid();
            let hh = grid.spacing();
            let m = grid.len() - 1;
            let w: Vec<f64> = grid.nodes().map(|t| t.cosh()).collect();
            let mut worst = 0.0_f64;
            for trial in 0..5 {
                let a = 0.4 + 0.3 * trial as f64;
                let phi: Vec<f64> = grid
                    .nodes()
                    .map(|t| {
                        let s = t / 5.0;
                        if s.abs() >= 1.0 {
                            0.0
                        } else {
                            let b = (1.0 - s * s).powi(3);
                            b * (a * t).cos()
                        }
                    })
                    .collect();
                let mut quad = 0.0;
                for i in 0..m {
                    let d = (phi[i + 1] - phi[i]) / hh;
                    let wm = ((grid.node(i) + grid.node(i + 1)) / 2.0).cosh();
                    quad += d * d * wm * hh;
                }
                for i in 0..=m {
                    quad += prof.potential().nonlinearity_prime(prof.values()[i])
                        * phi[i]
                        * phi[i]
                        * w[i]
                        * hh;
                }
                let mut inner = 0.0;
                for i in 1..m {
                    let t = grid.node(i);
                    let lphi = (phi[i + 1] - 2.0 * phi[i] + phi[i - 1]) / (hh * hh)
                        + t.tanh() * (phi[i + 1] - phi[i - 1]) / (2.0 * hh)
                        - prof.potential().nonlinearity_prime(prof.values()[i]) * phi[i];
                    inner += -lphi * phi[i] * w[i] * hh;
                }
                worst = worst.max((quad - inner).abs());
            }
            worst
        };
        let g1 = form_gap(0.02);
        let g2 = form_gap(0.01);
        assert!(g1 / g2 > 3.0, "gaps {g1:e}, {g2:e}");
    }

    #[test]
    fn decay_fit_quartic() {
        let prof = quartic_profile(2, 12.0, 0.005);
        let rates = spectral_rates(prof.potential(), 2).unwrap();
        let est = estimate_decay(&prof, &rates).unwrap();
        assert!((est.beta_hat_plus - 2.0).abs() / 2.0 < 0.05, "{}", est.beta_hat_plus);
        assert!((est.beta_hat_minus - 2.0).abs() / 2.0 < 0.05);
        assert!(est.beta_hat_plus > 1.0); // beta > n-1
    }

    #[test]
    fn decay_fit_asymmetric() {
        let p = asymmetric();
        let prof = solve_profile(&p, 2, 12.0, 0.005, 1e-11).unwrap();
        let rates = spectral_rates(&p, 2).unwrap();
        let est = estimate_decay(&prof, &rates).unwrap();
        assert!(
            (est.beta_hat_plus - rates.beta_plus).abs() / rates.beta_plus < 0.05,
            "plus: {} vs {}",
            est.beta_hat_plus,
            rates.beta_plus
        );
        assert!(
            (est.beta_hat_minus - rates.beta_minus).abs() / rates.beta_minus < 0.05,
            "minus: {} vs {}",
            est.beta_hat_minus,
            rates.beta_minus
        );
        assert!((est.beta_hat_plus - est.beta_hat_minus).abs() > 0.1);
    }

    #[test]
    fn window_too_small() {
        let coarse = solve_profile(&DoubleWellPotential::quartic(), 2, 4.5, 0.2, 1e-8).unwrap();
        let rates = spectral_rates(coarse.potential(), 2).unwrap();
        assert!(matches!(
            estimate_decay(&coarse, &rates),
            Err(Error::WindowTooSmall { .. })
        ));
    }

    #[test]
    fn eigenvalue_positive_and_shifts() {
        let prof = quartic_profile(2, 12.0, 0.005);
        let (lam, phi) = lowest_eigenvalue_1d(&prof).unwrap();
        assert!(lam > 0.0, "lambda = {lam}");
        let (lam_s, _) = lowest_eigenvalue_1d_shifted(&prof, 0.7).unwrap();
        assert!((lam_s - lam - 0.7).abs() < 1e-10, "shift gap {}", lam_s - lam - 0.7);
        // Weighted normalization.
        let h = prof.grid().spacing();
        let w_norm: f64 = phi
            .iter()
            .enumerate()
            .map(|(i, p)| p * p * prof.grid().node(i).cosh() * h)
            .sum();
        assert!((w_norm - 1.0).abs() < 1e-10);
    }

    #[test]
    fn eigenvalue_truncation_stable() {
        let a = quartic_profile(2, 10.0, 0.005);
        let b = quartic_profile(2, 12.0, 0.005);
        let (la, _) = lowest_eigenvalue_1d(&a).unwrap();
        let (lb, _) = lowest_eigenvalue_1d(&b).unwrap();
        assert!((la - lb).abs() < 1e-6, "gap = {:e}", la - lb);
    }

    #[test]
    fn eigenvalue_positive_dims() {
        for n in [2, 3, 4] {
            let prof = quartic_profile(n, 10.0, 0.01);
            let (lam, _) = lowest_eigenvalue_1d(&prof).unwrap();
            assert!(lam > 0.0, "n = {n}: lambda = {lam}");
        }
    }

    #[test]
    fn phi_delta_limits() {
        //

        // Tiny delta: phi stays near 1.
        let pd = compute_phi_delta(3, 1e-8, 10.0, 0.01).unwrap();
        assert!(pd.phi.iter().all(|&p| (p - 1.0).abs() < 1e-5));
        // Out-of-range delta.
        assert!(matches!(
            compute_phi_delta(3, 0.5, 10.0, 0.01),
            Err(Error::ExponentOutOfRange { .. })
        ));
        assert!(matches!(
            compute_phi_delta(3, -0.1, 10.0, 0.01),
            Err(Error::ExponentOutOfRange { .. })
        ));
    }

    #[test]
    fn phi_delta_slope() {
        let pd = compute_phi_delta(3, 0.25, 20.0, 0.005).unwrap();
        assert!(pd.phi.iter().all(|&p| p > 0.0));
        let (mut xs, mut ys) = (Vec::new(), Vec::new());
        for (r, p) in pd.r.iter().zip(&pd.phi) {
            if *r >= 12.0 && *r <= 18.0 {
                xs.push(*r);
                ys.push(p.ln());
            }
        }
        let (slope, _, _) = linear_fit(&xs, &ys);
        assert!(
            (slope + 0.25).abs() / 0.25 < 0.02,
            "slope = {slope}, want -0.25 within 2%"
        );
    }

    #[test]
    fn supersolution_passes_n2() {
        let prof = quartic_profile(2, 12.0, 0.005);
        let rates = spectral_rates(prof.potential(), 2).unwrap();
        let rep = check_supersolution(&prof, &rates, 1.0, None, 0.02).unwrap();
        assert!(rep.worst_ratio < 0.0, "worst = {}", rep.worst_ratio);
        assert!(rep.a1 > 0.0);
        assert!(rep.a1_prime >= rep.a1);
    }

    #[test]
    fn supersolution_tail_failure_above_beta() {
        let prof = quartic_profile(2, 12.0, 0.005);
        let rates = spectral_rates(prof.potential(), 2).unwrap();
        match check_supersolution(&prof, &rates, 2.5, None, 0.02) {
            Err(Error::SupersolutionViolation { worst, at_t, .. }) => {
                assert!(worst > 0.0);
                // The failure comes from the e^{-mu|t|} branch in the tail.
                assert!(at_t.abs() > 1.0, "at_t = {at_t}");
            }
            other => panic!("expected tail violation, got {other:?}"),
        }
    }

    #[test]
    fn supersolution_passes_n3() {
        let prof = quartic_profile(3, 10.0, 0.01);
        let rates = spectral_rates(prof.potential(), 3).unwrap();
        let rep = check_supersolution(&prof, &rates, 1.0, Some(0.25), 0.02).unwrap();
        assert!(rep.worst_ratio < 0.0, "worst = {}", rep.worst_ratio);
        assert!(rep.a1 > 0.0);
    }
}
