//! Heat-equation solutions assembled from coefficient tables, their residuals,
//! the gauge and rescaling maps, and the Cole–Hopf images in Burgers form.

use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::ansatz::{compute_yk, AnsatzSpec, Parity, PhiTable};
use crate::dynsys::{HeatSystem, MobiusParam, RationalH, Trajectory};
use crate::error::{Error, Result};
use crate::grpoly::{Family, GradedPoly};
use crate::operators::compute_dk;
use crate::scalar::{factorial, int, rat, to_f64, Dual, Rational, Scalar};
use crate::series::Laurent;

/// Default number of `Φ_k` kept in an assembled series.
pub const DEFAULT_ORDER: usize = 10;

/// Something that can be sampled on a `(z, t)` grid.
pub trait Profile {
    fn eval(&self, z: f64, t: f64) -> Result<f64>;
}

impl<F> Profile for F
where
    F: Fn(f64, f64) -> f64,
{
    fn eval(&self, z: f64, t: f64) -> Result<f64> {
        Ok(self(z, t))
    }
}

/// Numerically integrated profile `h = x_1` of a heat dynamical system.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectorySource {
    system: HeatSystem,
    trajectory: Trajectory,
    cumulative: Vec<f64>,
}

impl TrajectorySource {
    pub fn new(system: HeatSystem, trajectory: Trajectory) -> Result<TrajectorySource> {
        if trajectory.times.is_empty() {
            return Err(Error::Invalid("empty trajectory".into()));
        }
        if let Some(s) = trajectory.states.iter().find(|s| s.len() != system.dim()) {
            return Err(Error::Dimension {
                expected: system.dim(),
                found: s.len(),
            });
        }
        let mut cumulative = vec![0.0];
        for i in 1..trajectory.times.len() {
            let dt = trajectory.times[i] - trajectory.times[i - 1];
            let area = 0.5 * dt * (trajectory.states[i][0] + trajectory.states[i - 1][0]);
            cumulative.push(cumulative[i - 1] + area);
        }
        Ok(TrajectorySource {
            system,
            trajectory,
            cumulative,
        })
    }

    pub fn system(&self) -> &HeatSystem {
        &self.system
    }

    pub fn trajectory(&self) -> &Trajectory {
        &self.trajectory
    }

    fn state(&self, t: f64) -> Result<Vec<f64>> {
        self.trajectory
            .state_at(t)
            .ok_or_else(|| Error::Invalid(format!("t = {t} lies outside the integrated range")))
    }

    /// Trapezoid value of `∫_{t_0}^{t} x_1`.
    fn integral_h(&self, t: f64) -> Result<f64> {
        let x = self.state(t)?;
        let times = &self.trajectory.times;
        let forward = times.len() < 2 || times[1] >= times[0];
        let i = times
            .iter()
            .rposition(|&s| if forward { s <= t } else { s >= t })
            .unwrap_or(0);
        let tail = 0.5 * (t - times[i]) * (x[0] + self.trajectory.states[i][0]);
        Ok(self.cumulative[i] + tail)
    }
}

/// Where `h(t)` (and the chain variables) come from.
#[derive(Clone, Debug, PartialEq)]
pub enum HSource {
    Rational(RationalH),
    Trajectory(TrajectorySource),
}

/// `Σ_{α_k≠0} ln(α_k/(α_k t − β_k))`, rejecting non-positive bases.
fn log_pole_bases(h: &RationalH, t: f64) -> Result<f64> {
    let mut acc = 0.0;
    for p in h.poles() {
        let a = to_f64(p.alpha());
        if a == 0.0 {
            continue;
        }
        let denom = a * t - to_f64(p.beta());
        if denom == 0.0 {
            return Err(Error::Pole { t: t.to_string() });
        }
        let base = a / denom;
        if base <= 0.0 {
            return Err(Error::NegativeBase {
                t: t.to_string(),
                base: base.to_string(),
            });
        }
        acc += base.ln();
    }
    Ok(acc)
}

/// `r(t)` with `r' = −(δ+½)h`.
///
/// For a rational profile `e^r = e^{r_0} Π_{α_k≠0} (α_k/(α_k t − β_k))^{(δ+½)/(n+1)}`;
/// for a trajectory `r` is the trapezoid integral from the first node, where `r = r_0`.
pub fn r_of_t(source: &HSource, parity: Parity, r0: &Rational, t: f64) -> Result<f64> {
    let weight = parity.delta() as f64 + 0.5;
    let r0 = to_f64(r0);
    match source {
        HSource::Rational(h) => {
            Ok(r0 + weight / (h.n() + 1) as f64 * log_pole_bases(h, t)?)
        }
        HSource::Trajectory(tr) => Ok(r0 - weight * tr.integral_h(t)?),
    }
}

/// Time-dependent loss rate `f(t)` in `ψ_t = ½ψ_zz − fψ`.
#[derive(Clone)]
pub enum Gauge {
    /// `f(t) = Σ c_i t^i`, integrated exactly from `t = 0`.
    Polynomial(Vec<Rational>),
    /// Arbitrary `f`, integrated by composite Simpson from `t_ref`.
    Numeric {
        f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        t_ref: f64,
    },
}

impl fmt::Debug for Gauge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gauge::Polynomial(c) => f.debug_tuple("Polynomial").field(c).finish(),
            Gauge::Numeric { t_ref, .. } => f.debug_struct("Numeric").field("t_ref", t_ref).finish(),
        }
    }
}

const SIMPSON_PANELS: usize = 512;

impl Gauge {
    pub fn constant(c: Rational) -> Gauge {
        Gauge::Polynomial(vec![c])
    }

    pub fn rate(&self, t: f64) -> f64 {
        match self {
            Gauge::Polynomial(c) => c.iter().rev().fold(0.0, |acc, ci| acc * t + to_f64(ci)),
            Gauge::Numeric { f, .. } => f(t),
        }
    }

    /// `G(t)` with `G' = f`.
    pub fn antiderivative(&self, t: f64) -> f64 {
        match self {
            Gauge::Polynomial(c) => c
                .iter()
                .enumerate()
                .rev()
                .fold(0.0, |acc, (i, ci)| acc * t + to_f64(ci) / (i + 1) as f64)
                * t,
            Gauge::Numeric { f, t_ref } => {
                let h = (t - t_ref) / SIMPSON_PANELS as f64;
                let mut acc = f(*t_ref) + f(t);
                for i in 1..SIMPSON_PANELS {
                    let w = if i % 2 == 1 { 4.0 } else { 2.0 };
                    acc += w * f(t_ref + h * i as f64);
                }
                acc * h / 3.0
            }
        }
    }
}

/// Truncated series `ψ(z,t) = e^{−½h z² + r}(z^δ + Σ_{k=2}^{K} Φ_k z^{2k+δ}/(2k+δ)!)`.
#[derive(Clone, Debug)]
pub struct SeriesSolution {
    parity: Parity,
    source: HSource,
    r0: Rational,
    phi: PhiTable,
    order: usize,
    gauges: Vec<Gauge>,
}

fn used_vars(phi: &PhiTable, order: usize) -> usize {
    phi.entries()[..=order]
        .iter()
        .map(GradedPoly::used_nvars)
        .max()
        .unwrap_or(0)
}

impl SeriesSolution {
    /// Series from an explicit table; `Y` tables are read at the jets of `h`,
    /// `X` tables at `x_1 = h`, `x_k = 𝒟_{k−1}` (or at the trajectory state).
    pub fn new(
        parity: Parity,
        source: HSource,
        r0: Rational,
        phi: PhiTable,
        order: usize,
    ) -> Result<SeriesSolution> {
        if order < 2 {
            return Err(Error::Invalid(format!("truncation order must be at least 2, got {order}")));
        }
        if phi.max_order() < order || phi.entries().len() < 2 {
            return Err(Error::Invalid(format!(
                "table holds Φ_0..Φ_{} but order {order} was requested",
                phi.max_order()
            )));
        }
        if phi.parity() != parity {
            return Err(Error::Invalid("table parity differs from the requested parity".into()));
        }
        match (&source, phi.family()) {
            (HSource::Rational(_), Family::X | Family::Y) => {}
            (HSource::Trajectory(tr), Family::X) => {
                if used_vars(&phi, order) > tr.system().n() {
                    return Err(Error::Dimension {
                        expected: tr.system().n(),
                        found: used_vars(&phi, order),
                    });
                }
            }
            (_, f) => {
                return Err(Error::Unsupported(format!(
                    "a {f:?} table cannot be driven by this h source"
                )))
            }
        }
        Ok(SeriesSolution {
            parity,
            source,
            r0,
            phi,
            order,
            gauges: Vec::new(),
        })
    }

    /// Differential-algebraic solution `Φ_k = Y_k(h, h', …)` for a rational profile.
    pub fn differential_algebraic(
        parity: Parity,
        h: RationalH,
        r0: Rational,
        order: usize,
    ) -> Result<SeriesSolution> {
        SeriesSolution::new(parity, HSource::Rational(h), r0, compute_yk(parity, order), order)
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn source(&self) -> &HSource {
        &self.source
    }

    pub fn r0(&self) -> &Rational {
        &self.r0
    }

    pub fn phi(&self) -> &PhiTable {
        &self.phi
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn gauges(&self) -> &[Gauge] {
        &self.gauges
    }

    /// Sum of the loss rates of all applied gauges.
    pub fn potential(&self, t: f64) -> f64 {
        self.gauges.iter().map(|g| g.rate(t)).sum()
    }

    fn nvars(&self) -> usize {
        used_vars(&self.phi, self.order)
    }

    /// `h` and the table's evaluation point at an exact time, as value plus time derivative.
    pub fn dual_point(&self, t: &Rational) -> Result<(Dual<Rational>, Vec<Dual<Rational>>)> {
        let HSource::Rational(h) = &self.source else {
            return Err(Error::Unsupported("exact sampling needs a rational h".into()));
        };
        let nv = self.nvars();
        let jets_needed = match self.phi.family() {
            Family::Y => nv.max(1),
            _ => nv + 1,
        };
        let jets = h.jets(t, jets_needed + 1)?.values;
        let dual: Vec<Dual<Rational>> = jets
            .windows(2)
            .map(|w| Dual::new(w[0].clone(), w[1].clone()))
            .collect();
        let point = match self.phi.family() {
            Family::Y => dual[..nv].to_vec(),
            _ => compute_dk(nv)
                .iter()
                .map(|d| d.eval(&dual))
                .collect::<Result<_>>()?,
        };
        Ok((dual[0].clone(), point))
    }

    /// Same as [`dual_point`](Self::dual_point) in floating point; for a trajectory the
    /// derivative comes from the vector field at the interpolated state.
    pub fn dual_point_f64(&self, t: f64) -> Result<(Dual<f64>, Vec<Dual<f64>>)> {
        match &self.source {
            HSource::Rational(h) => {
                let nv = self.nvars();
                let jets_needed = match self.phi.family() {
                    Family::Y => nv.max(1),
                    _ => nv + 1,
                };
                let jets = h.jets_f64(t, jets_needed + 1)?;
                let dual: Vec<Dual<f64>> = jets.windows(2).map(|w| Dual::new(w[0], w[1])).collect();
                let point = match self.phi.family() {
                    Family::Y => dual[..nv].to_vec(),
                    _ => compute_dk(nv)
                        .iter()
                        .map(|d| d.eval(&dual))
                        .collect::<Result<_>>()?,
                };
                Ok((dual[0], point))
            }
            HSource::Trajectory(tr) => {
                let x = tr.state(t)?;
                let dx = tr.system().field(&x)?;
                let dual: Vec<Dual<f64>> = x.iter().zip(&dx).map(|(a, b)| Dual::new(*a, *b)).collect();
                Ok((dual[0], dual[1..].to_vec()))
            }
        }
    }

    fn phi_values<T: Scalar>(&self, point: &[T]) -> Result<Vec<T>> {
        self.phi.entries()[..=self.order]
            .iter()
            .map(|p| p.eval(point))
            .collect()
    }

    /// `χ_k = e^{−r}ψ_k`, the Taylor data of `e^{−r}ψ` scaled by `(2k+δ)!`.
    fn chi<T: Scalar>(&self, h: &T, phi: &[T]) -> Vec<T> {
        let d = self.parity.delta() as u32;
        let minus_half_h = h.clone() * T::from_rational(&rat(-1, 2));
        let mut powers = vec![T::one()];
        for i in 1..=self.order {
            powers.push(powers[i - 1].clone() * minus_half_h.clone());
        }
        (0..=self.order)
            .map(|k| {
                let mut acc = T::zero();
                for j in 0..=k {
                    let c = factorial(2 * k as u32 + d)
                        / (factorial((k - j) as u32) * factorial(2 * j as u32 + d));
                    acc = acc + T::from_rational(&c) * powers[k - j].clone() * phi[j].clone();
                }
                acc
            })
            .collect()
    }

    /// `χ_k − 2χ'_{k−1} + (2δ+1)hχ_{k−1}` for `k = 1..K`, which is `e^{−r}(ψ_k − 2ψ'_{k−1})`.
    fn defects<T: Scalar>(&self, h: Dual<T>, point: &[Dual<T>]) -> Result<Vec<T>> {
        let phi = self.phi_values(point)?;
        let chi = self.chi(&h, &phi);
        let damp = T::from_int(2 * self.parity.delta() + 1) * h.v.clone();
        Ok((1..=self.order)
            .map(|k| {
                chi[k].v.clone() - T::from_int(2) * chi[k - 1].d.clone()
                    + damp.clone() * chi[k - 1].v.clone()
            })
            .collect())
    }

    /// Exact defects of the coefficient recursion at `t`.
    pub fn heat_defects(&self, t: &Rational) -> Result<Vec<Rational>> {
        let (h, point) = self.dual_point(t)?;
        self.defects(h, &point)
    }

    pub fn heat_defects_f64(&self, t: f64) -> Result<Vec<f64>> {
        let (h, point) = self.dual_point_f64(t)?;
        self.defects(h, &point)
    }

    /// Coefficients of `z^{2k+δ}` in `e^{−r}ψ`, `k = 0..K`.
    pub fn stripped_coefficients(&self, t: &Rational) -> Result<Vec<Rational>> {
        let (h, point) = self.dual_point(t)?;
        let values: Vec<Rational> = point.into_iter().map(|p| p.v).collect();
        let phi = self.phi_values(&values)?;
        let d = self.parity.delta() as u32;
        Ok(self
            .chi(&h.v, &phi)
            .into_iter()
            .enumerate()
            .map(|(k, c)| c / factorial(2 * k as u32 + d))
            .collect())
    }

    /// `h(t)` and `Φ_0(t)..Φ_K(t)`.
    pub fn coefficients_f64(&self, t: f64) -> Result<(f64, Vec<f64>)> {
        let (h, point) = self.dual_point_f64(t)?;
        let values: Vec<f64> = point.into_iter().map(|p| p.v).collect();
        Ok((h.v, self.phi_values(&values)?))
    }

    /// `r(t)` including every applied gauge.
    pub fn r_at(&self, t: f64) -> Result<f64> {
        let g: f64 = self.gauges.iter().map(|g| g.antiderivative(t)).sum();
        Ok(r_of_t(&self.source, self.parity, &self.r0, t)? - g)
    }

    pub fn eval(&self, z: f64, t: f64) -> Result<f64> {
        let (h, phi) = self.coefficients_f64(t)?;
        let d = self.parity.delta() as u32;
        let z2 = z * z;
        let mut acc = 0.0;
        let mut zp = 1.0;
        for (k, p) in phi.iter().enumerate() {
            acc += p * zp / to_f64(&factorial(2 * k as u32 + d));
            zp *= z2;
        }
        let value = (self.r_at(t)? - 0.5 * h * z2).exp() * acc * z.powi(d as i32);
        if !value.is_finite() {
            return Err(Error::NonFinite {
                at: format!("z = {z}, t = {t}"),
            });
        }
        Ok(value)
    }
}

impl Profile for SeriesSolution {
    fn eval(&self, z: f64, t: f64) -> Result<f64> {
        SeriesSolution::eval(self, z, t)
    }
}

/// n-ansatz series for `spec`, truncated after `Φ_K`.
pub fn assemble_psi(
    spec: &AnsatzSpec,
    source: HSource,
    r0: Rational,
    order: usize,
) -> Result<SeriesSolution> {
    if order < 2 {
        return Err(Error::Invalid(format!("truncation order must be at least 2, got {order}")));
    }
    if let HSource::Trajectory(tr) = &source {
        if tr.system().n() != spec.n() {
            return Err(Error::Dimension {
                expected: spec.n() + 1,
                found: tr.system().dim(),
            });
        }
    }
    SeriesSolution::new(spec.parity(), source, r0, spec.phi_table(order)?, order)
}

/// Max over samples and `k = 1..K` of the (prefactor-free) recursion defect.
pub fn heat_residual_series(s: &SeriesSolution, t_samples: &[Rational]) -> Result<Rational> {
    let mut worst = Rational::zero();
    for t in t_samples {
        for d in s.heat_defects(t)? {
            if d.abs() > worst {
                worst = d.abs();
            }
        }
    }
    Ok(worst)
}

/// Floating version of [`heat_residual_series`], also available for trajectories.
pub fn heat_residual_series_f64(s: &SeriesSolution, t_samples: &[f64]) -> Result<f64> {
    let mut worst = 0.0f64;
    for &t in t_samples {
        for d in s.heat_defects_f64(t)? {
            worst = worst.max(d.magnitude());
        }
    }
    Ok(worst)
}

/// Multiplies by `e^{−G(t)}` with `G' = f`, turning a solution of `ψ_t = ½ψ_zz`
/// into one of `ψ_t = ½ψ_zz − fψ`.
pub fn gauge_transform(s: &SeriesSolution, gauge: Gauge) -> SeriesSolution {
    let mut out = s.clone();
    out.gauges.push(gauge);
    out
}

/// `φ(z,t) = ψ(z, 2μt)`, a solution of `φ_t = μφ_zz` when `ψ_t = ½ψ_zz`.
#[derive(Clone, Debug)]
pub struct Rescaled<P> {
    inner: P,
    mu: f64,
}

impl<P> Rescaled<P> {
    pub fn mu(&self) -> f64 {
        self.mu
    }
}

pub fn rescale_to_mu<P: Profile>(psi: P, mu: f64) -> Result<Rescaled<P>> {
    if mu == 0.0 || !mu.is_finite() {
        return Err(Error::Invalid(format!("mu must be finite and nonzero, got {mu}")));
    }
    Ok(Rescaled { inner: psi, mu })
}

impl<P: Profile> Profile for Rescaled<P> {
    fn eval(&self, z: f64, t: f64) -> Result<f64> {
        self.inner.eval(z, 2.0 * self.mu * t)
    }
}

/// Grid of sample points together with the finite-difference spacings.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub z_min: f64,
    pub z_max: f64,
    pub nz: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub nt: usize,
    pub dz: f64,
    pub dt: f64,
}

impl GridSpec {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        z_min: f64,
        z_max: f64,
        nz: usize,
        t_min: f64,
        t_max: f64,
        nt: usize,
        dz: f64,
        dt: f64,
    ) -> Result<GridSpec> {
        let g = GridSpec {
            z_min,
            z_max,
            nz,
            t_min,
            t_max,
            nt,
            dz,
            dt,
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        let finite = [self.z_min, self.z_max, self.t_min, self.t_max, self.dz, self.dt]
            .iter()
            .all(|v| v.is_finite());
        if !finite || self.nz == 0 || self.nt == 0 || self.dz <= 0.0 || self.dt <= 0.0 {
            return Err(Error::Invalid(format!("bad grid {self:?}")));
        }
        if self.z_max < self.z_min || self.t_max < self.t_min {
            return Err(Error::Invalid("grid ranges must be increasing".into()));
        }
        Ok(())
    }

    /// `z ∈ [−1, 1]` (21 points), `t ∈ [0.5, 1.5]` (11 points), spacing `step` in both.
    pub fn standard(step: f64) -> GridSpec {
        GridSpec {
            z_min: -1.0,
            z_max: 1.0,
            nz: 21,
            t_min: 0.5,
            t_max: 1.5,
            nt: 11,
            dz: step,
            dt: step,
        }
    }

    pub fn with_spacing(&self, step: f64) -> GridSpec {
        GridSpec {
            dz: step,
            dt: step,
            ..self.clone()
        }
    }

    fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        if n == 1 {
            return vec![lo];
        }
        (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect()
    }

    pub fn z_points(&self) -> Vec<f64> {
        GridSpec::linspace(self.z_min, self.z_max, self.nz)
    }

    pub fn t_points(&self) -> Vec<f64> {
        GridSpec::linspace(self.t_min, self.t_max, self.nt)
    }
}

fn finite(v: f64, z: f64, t: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite {
            at: format!("z = {z}, t = {t}"),
        })
    }
}

/// `max |D_tψ − μD_zzψ + f(t)ψ|` over the grid with central differences.
pub fn pde_residual_numeric<P: Profile + ?Sized>(
    psi: &P,
    grid: &GridSpec,
    mu: f64,
    potential: &dyn Fn(f64) -> f64,
) -> Result<f64> {
    grid.validate()?;
    let (dz, dt) = (grid.dz, grid.dt);
    let mut worst = 0.0f64;
    for t in grid.t_points() {
        for z in grid.z_points() {
            let c = finite(psi.eval(z, t)?, z, t)?;
            let d_t = (psi.eval(z, t + dt)? - psi.eval(z, t - dt)?) / (2.0 * dt);
            let d_zz = (psi.eval(z + dz, t)? - 2.0 * c + psi.eval(z - dz, t)?) / (dz * dz);
            let r = finite(d_t - mu * d_zz + potential(t) * c, z, t)?;
            worst = worst.max(r.abs());
        }
    }
    Ok(worst)
}

/// `max |D_tψ − ½D_zzψ|`.
pub fn heat_residual_numeric<P: Profile + ?Sized>(psi: &P, grid: &GridSpec) -> Result<f64> {
    pde_residual_numeric(psi, grid, 0.5, &|_| 0.0)
}

/// `max |D_t v + v D_z v − μ D_zz v|` with central differences.
pub fn burgers_residual_numeric<P: Profile + ?Sized>(v: &P, grid: &GridSpec, mu: f64) -> Result<f64> {
    grid.validate()?;
    let (dz, dt) = (grid.dz, grid.dt);
    let mut worst = 0.0f64;
    for t in grid.t_points() {
        for z in grid.z_points() {
            let c = finite(v.eval(z, t)?, z, t)?;
            let (vp, vm) = (v.eval(z + dz, t)?, v.eval(z - dz, t)?);
            let d_t = (v.eval(z, t + dt)? - v.eval(z, t - dt)?) / (2.0 * dt);
            let d_z = (vp - vm) / (2.0 * dz);
            let d_zz = (vp - 2.0 * c + vm) / (dz * dz);
            worst = worst.max(finite(d_t + c * d_z - mu * d_zz, z, t)?.abs());
        }
    }
    Ok(worst)
}

/// Cole–Hopf image `w = −2μ ∂_z ln φ` of the rescaled series, in the form
/// `w(z,t) = 2μ v(z, 2μt)` with
/// `v = −δ/z + hz − Σ_{k≥2} Ψ_k/(2δk+1) · z^{2k−1}/(2k−1)!`.
#[derive(Clone, Debug)]
pub struct BurgersSolution {
    source: SeriesSolution,
    psi: Vec<GradedPoly>,
    mu: Rational,
}

/// Ψ_k from `G = F'/F`, `F(w) = Σ Φ_k w^k/(2k+δ)!`: `Ψ_k = 2(2δk+1)(2k−1)!·G_{k−1}`.
fn psi_from_phi(phi: &[GradedPoly], parity: Parity) -> Vec<GradedPoly> {
    let d = parity.delta();
    let family = phi[0].family();
    let f: Vec<GradedPoly> = phi
        .iter()
        .enumerate()
        .map(|(k, p)| p.scale(&(int(1) / factorial(2 * k as u32 + d as u32))))
        .collect();
    let order = f.len() - 1;
    let mut g: Vec<GradedPoly> = Vec::with_capacity(order);
    for j in 0..order {
        let mut gj = f[j + 1].scale(&int(j as i64 + 1));
        for i in 1..=j {
            gj = &gj - &(&f[i] * &g[j - i]);
        }
        g.push(gj);
    }
    let mut out = vec![GradedPoly::zero(family)];
    for k in 1..=order {
        let ki = k as i64;
        let c = int(2 * (2 * d * ki + 1)) * factorial(2 * k as u32 - 1);
        out.push(g[k - 1].scale(&c));
    }
    out
}

impl BurgersSolution {
    pub fn parity(&self) -> Parity {
        self.source.parity
    }

    pub fn mu(&self) -> &Rational {
        &self.mu
    }

    pub fn heat_solution(&self) -> &SeriesSolution {
        &self.source
    }

    /// `Ψ_0..Ψ_K`; entries 0 and 1 vanish.
    pub fn psi_coefficients(&self) -> &[GradedPoly] {
        &self.psi
    }

    pub fn with_mu(&self, mu: Rational) -> Result<BurgersSolution> {
        if mu.is_zero() {
            return Err(Error::Invalid("mu must be nonzero".into()));
        }
        Ok(BurgersSolution {
            mu,
            ..self.clone()
        })
    }

    fn denominators(&self, k: usize) -> Rational {
        int(2 * self.parity().delta() * k as i64 + 1) * factorial(2 * k as u32 - 1)
    }

    /// Laurent data of `w` and `w_t` at an exact time.
    pub fn laurent_at(&self, t: &Rational) -> Result<(Laurent<Rational>, Laurent<Rational>)> {
        let two_mu = int(2) * &self.mu;
        let tau = &two_mu * t;
        let (h, point) = self.source.dual_point(&tau)?;
        let order = self.source.order;
        let prec = 2 * order as i32;
        let mut v = vec![Rational::zero(); (prec + 2) as usize];
        let mut vt = v.clone();
        // index i holds exponent i − 1
        v[0] = int(-self.parity().delta());
        v[2] = h.v;
        vt[2] = h.d;
        for k in 2..=order {
            let c = self.psi[k].eval(&point)?;
            let den = self.denominators(k);
            v[2 * k] = -c.v / &den;
            vt[2 * k] = -c.d / &den;
        }
        let w = Laurent::new(-1, v, prec).scale(&two_mu);
        let wt = Laurent::new(-1, vt, prec).scale(&(&two_mu * &two_mu));
        Ok((w, wt))
    }

    /// `w_t + w w_z − μ w_zz` as a Laurent series, trusted through `z^{2K−2}`.
    pub fn residual_series(&self, t: &Rational) -> Result<Laurent<Rational>> {
        let (w, wt) = self.laurent_at(t)?;
        let wz = w.derivative();
        Ok(wt.add(&w.mul(&wz)).sub(&wz.derivative().scale(&self.mu)))
    }

    pub fn eval(&self, z: f64, t: f64) -> Result<f64> {
        let d = self.parity().delta();
        if d == 1 && z == 0.0 {
            return Err(Error::Invalid("odd Burgers image has a pole at z = 0".into()));
        }
        let two_mu = 2.0 * to_f64(&self.mu);
        let (h, point) = self.source.dual_point_f64(two_mu * t)?;
        let values: Vec<f64> = point.into_iter().map(|p| p.v).collect();
        let mut v = h.v * z;
        if d == 1 {
            v -= 1.0 / z;
        }
        for k in 2..=self.source.order {
            let c = self.psi[k].eval(&values)?;
            v -= c / to_f64(&self.denominators(k)) * z.powi(2 * k as i32 - 1);
        }
        finite(two_mu * v, z, t)
    }
}

impl Profile for BurgersSolution {
    fn eval(&self, z: f64, t: f64) -> Result<f64> {
        BurgersSolution::eval(self, z, t)
    }
}

/// `v = −∂_z ln ψ` computed by dividing the series; `μ = ½`.
pub fn cole_hopf(s: &SeriesSolution) -> Result<BurgersSolution> {
    let entries = &s.phi.entries()[..=s.order];
    if entries.iter().all(GradedPoly::is_zero) {
        return Err(Error::Invalid("psi is identically zero".into()));
    }
    Ok(BurgersSolution {
        psi: psi_from_phi(entries, s.parity),
        source: s.clone(),
        mu: rat(1, 2),
    })
}

/// How [`burgers_residual`] checks a solution.
#[derive(Clone, Debug)]
pub enum BurgersMode<'a> {
    /// Exact Laurent coefficients at the given times.
    Series(&'a [Rational]),
    /// Central differences on a grid.
    Grid(&'a GridSpec),
}

/// Largest Laurent coefficient of the Burgers defect through the trusted order.
pub fn burgers_residual_series(b: &BurgersSolution, t_samples: &[Rational]) -> Result<Rational> {
    let trusted = 2 * b.source.order as i32 - 3;
    let mut worst = Rational::zero();
    for t in t_samples {
        let r = b.residual_series(t)?;
        for (e, c) in r.iter() {
            if e <= trusted && c.abs() > worst {
                worst = c.abs();
            }
        }
    }
    Ok(worst)
}

pub fn burgers_residual(b: &BurgersSolution, mode: BurgersMode<'_>) -> Result<f64> {
    match mode {
        BurgersMode::Series(samples) => Ok(to_f64(&burgers_residual_series(b, samples)?)),
        BurgersMode::Grid(grid) => burgers_residual_numeric(b, grid, to_f64(&b.mu)),
    }
}

/// A closed-form heat solution with its Cole–Hopf velocity at `μ = ½`.
pub trait ClosedForm {
    fn parity(&self) -> Parity;
    fn psi(&self, z: f64, t: f64) -> Result<f64>;
    fn velocity(&self, z: f64, t: f64) -> Result<f64>;
}

/// `w(z,t) = 2μ v(z, 2μt)` for a closed form.
#[derive(Clone, Debug)]
pub struct BurgersProfile<C> {
    form: C,
    mu: f64,
}

impl<C: ClosedForm> BurgersProfile<C> {
    pub fn new(form: C, mu: f64) -> Result<Self> {
        if mu == 0.0 || !mu.is_finite() {
            return Err(Error::Invalid(format!("mu must be finite and nonzero, got {mu}")));
        }
        Ok(BurgersProfile { form, mu })
    }
}

impl<C: ClosedForm> Profile for BurgersProfile<C> {
    fn eval(&self, z: f64, t: f64) -> Result<f64> {
        Ok(2.0 * self.mu * self.form.velocity(z, 2.0 * self.mu * t)?)
    }
}

fn odd_pole(parity: Parity, z: f64) -> Result<f64> {
    match parity {
        Parity::Even => Ok(0.0),
        Parity::Odd if z == 0.0 => Err(Error::Invalid("odd Burgers image has a pole at z = 0".into())),
        Parity::Odd => Ok(1.0 / z),
    }
}

/// `ψ = (α/(αt−β))^{½+δ} exp(−αz²/(2(αt−β)) + r_0) z^δ`; for `α = 0` the
/// profile is `e^{r_0} z^δ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroAnsatz {
    parity: Parity,
    pole: MobiusParam,
    r0: Rational,
}

pub fn closed_form_0ansatz(parity: Parity, m: MobiusParam, r0: Rational) -> ZeroAnsatz {
    ZeroAnsatz {
        parity,
        pole: m,
        r0,
    }
}

impl ZeroAnsatz {
    pub fn h(&self) -> RationalH {
        RationalH::new(vec![self.pole.clone()]).expect("one pole")
    }

    fn base(&self, t: f64) -> Result<f64> {
        self.pole.derivative_f64(t, 0)
    }
}

impl ClosedForm for ZeroAnsatz {
    fn parity(&self) -> Parity {
        self.parity
    }

    fn psi(&self, z: f64, t: f64) -> Result<f64> {
        let a = self.base(t)?;
        let weight = 0.5 + self.parity.delta() as f64;
        let log = weight * log_pole_bases(&self.h(), t)? - 0.5 * a * z * z + to_f64(&self.r0);
        finite(log.exp() * z.powi(self.parity.delta() as i32), z, t)
    }

    fn velocity(&self, z: f64, t: f64) -> Result<f64> {
        Ok(self.base(t)? * z - odd_pole(self.parity, z)?)
    }
}

impl Profile for ZeroAnsatz {
    fn eval(&self, z: f64, t: f64) -> Result<f64> {
        self.psi(z, t)
    }
}

/// `Γ(¾+δ/2) / (m! Γ(m+¾+δ/2)) = 1/(m! Π_{j<m}(¾+δ/2+j))`.
pub fn gamma_ratio_coeff(m: usize, parity: Parity) -> Rational {
    let shift = rat(3 + 2 * parity.delta(), 4);
    let mut den = factorial(m as u32);
    for j in 0..m {
        den *= &shift + int(j as i64);
    }
    int(1) / den
}

/// `Φ_0..Φ_{q_max}` read off the Γ-series: `Φ_{2m} = (4m+δ)!·γ_m·(−x_2/16)^m`, odd entries zero.
pub fn gamma_phi_table(parity: Parity, q_max: usize) -> Vec<GradedPoly> {
    let d = parity.delta() as u32;
    let u = GradedPoly::var(Family::X, 2).scale(&rat(-1, 16));
    (0..=q_max)
        .map(|q| {
            if q % 2 == 1 {
                return GradedPoly::zero(Family::X);
            }
            let m = q / 2;
            let c = factorial(4 * m as u32 + d) * gamma_ratio_coeff(m, parity);
            u.pow(m as u32).scale(&c)
        })
        .collect()
}

const GAMMA_TERMS: usize = 400;

/// `(S(u), S'(u))` for `S(u) = Σ_m γ_m u^m`.
fn gamma_series(u: f64, parity: Parity) -> (f64, f64) {
    let shift = 0.75 + 0.5 * parity.delta() as f64;
    let (mut s, mut ds) = (0.0, 0.0);
    let mut term = 1.0;
    for m in 0..GAMMA_TERMS {
        s += term;
        // derivative term m+1: (m+1)γ_{m+1}u^m = term/(m+shift)
        let dterm = term / (m as f64 + shift);
        ds += dterm;
        let next = term * u / ((m as f64 + 1.0) * (m as f64 + shift));
        if next.abs() <= f64::EPSILON * s.abs() && dterm.abs() <= f64::EPSILON * ds.abs().max(f64::MIN_POSITIVE) {
            break;
        }
        term = next;
    }
    (s, ds)
}

/// The 1-ansatz family with `h = ½(a_1 + a_2)`, `a_k = α_k/(α_k t − β_k)`,
/// `x_2 = −¼(a_1 − a_2)²` and `ψ = 𝒢·z^δ S(−x_2 z⁴/16)`.
#[derive(Clone, Debug, PartialEq)]
pub struct OneAnsatz {
    parity: Parity,
    poles: [MobiusParam; 2],
    r0: Rational,
}

pub fn closed_form_1ansatz(parity: Parity, m1: MobiusParam, m2: MobiusParam, r0: Rational) -> OneAnsatz {
    OneAnsatz {
        parity,
        poles: [m1, m2],
        r0,
    }
}

impl OneAnsatz {
    pub fn h(&self) -> RationalH {
        RationalH::new(self.poles.to_vec()).expect("two poles")
    }

    fn bases(&self, t: f64) -> Result<(f64, f64)> {
        Ok((self.poles[0].derivative_f64(t, 0)?, self.poles[1].derivative_f64(t, 0)?))
    }

    pub fn x2(&self, t: f64) -> Result<f64> {
        let (a, b) = self.bases(t)?;
        Ok(-0.25 * (a - b) * (a - b))
    }
}

impl ClosedForm for OneAnsatz {
    fn parity(&self) -> Parity {
        self.parity
    }

    fn psi(&self, z: f64, t: f64) -> Result<f64> {
        let (a, b) = self.bases(t)?;
        let x2 = -0.25 * (a - b) * (a - b);
        let weight = (1.0 + 2.0 * self.parity.delta() as f64) / 4.0;
        let log = weight * log_pole_bases(&self.h(), t)? - 0.25 * z * z * (a + b) + to_f64(&self.r0);
        let (s, _) = gamma_series(-x2 * z.powi(4) / 16.0, self.parity);
        finite(log.exp() * z.powi(self.parity.delta() as i32) * s, z, t)
    }

    fn velocity(&self, z: f64, t: f64) -> Result<f64> {
        let (a, b) = self.bases(t)?;
        let x2 = -0.25 * (a - b) * (a - b);
        let (s, ds) = gamma_series(-x2 * z.powi(4) / 16.0, self.parity);
        let h = 0.5 * (a + b);
        Ok(h * z - odd_pole(self.parity, z)? + ds / s * x2 * z.powi(3) / 4.0)
    }
}

impl Profile for OneAnsatz {
    fn eval(&self, z: f64, t: f64) -> Result<f64> {
        self.psi(z, t)
    }
}
