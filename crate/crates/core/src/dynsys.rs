//! Heat dynamical systems, the rational `h(t)` family and the ODE residuals
//! that tie a profile `h` to an n-ansatz.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::ansatz::AnsatzSpec;
use crate::error::{Error, Result};
use crate::grpoly::{Family, GradedPoly, JetPoint};
use crate::operators::compute_dk;
use crate::scalar::{factorial, int, parse_rational, to_f64, Rational, Scalar};

/// Default bound on `|x_k|` beyond which integration stops.
pub const DEFAULT_GUARD: f64 = 1e12;

/// Projective pair `(α:β)` standing for the elementary pole `α/(αt − β)`.
#[derive(Clone, Debug)]
pub struct MobiusParam {
    alpha: Rational,
    beta: Rational,
}

impl MobiusParam {
    pub fn new(alpha: Rational, beta: Rational) -> Result<MobiusParam> {
        if alpha.is_zero() && beta.is_zero() {
            return Err(Error::DegenerateMobius);
        }
        Ok(MobiusParam { alpha, beta })
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    /// `β/α`, or `None` for the zero profile `(0:β)`.
    pub fn pole(&self) -> Option<Rational> {
        (!self.alpha.is_zero()).then(|| &self.beta / &self.alpha)
    }

    fn check(&self, t: &Rational) -> Result<Rational> {
        let base = &self.alpha * t - &self.beta;
        if !self.alpha.is_zero() && base.is_zero() {
            return Err(Error::Pole { t: t.to_string() });
        }
        Ok(base)
    }

    /// `d^m/dt^m α/(αt−β) = (−1)^m m! α^{m+1}/(αt−β)^{m+1}`.
    pub fn derivative(&self, t: &Rational, m: u32) -> Result<Rational> {
        let base = self.check(t)?;
        if self.alpha.is_zero() {
            return Ok(Rational::zero());
        }
        let mut v = factorial(m) * num_traits::pow(&self.alpha / &base, m as usize + 1);
        if m % 2 == 1 {
            v = -v;
        }
        Ok(v)
    }

    pub fn derivative_f64(&self, t: f64, m: u32) -> Result<f64> {
        let a = to_f64(&self.alpha);
        if a == 0.0 {
            return Ok(0.0);
        }
        let base = a * t - to_f64(&self.beta);
        if base == 0.0 {
            return Err(Error::Pole { t: t.to_string() });
        }
        let sign = if m % 2 == 1 { -1.0 } else { 1.0 };
        Ok(sign * to_f64(&factorial(m)) * (a / base).powi(m as i32 + 1))
    }
}

impl PartialEq for MobiusParam {
    fn eq(&self, other: &Self) -> bool {
        &self.alpha * &other.beta == &other.alpha * &self.beta
    }
}

impl Eq for MobiusParam {}

impl FromStr for MobiusParam {
    type Err = Error;

    /// `"a:b"` with rational or decimal entries.
    fn from_str(s: &str) -> Result<MobiusParam> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected alpha:beta, got {s:?}")))?;
        MobiusParam::new(parse_rational(a)?, parse_rational(b)?)
    }
}

impl fmt::Display for MobiusParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.alpha, self.beta)
    }
}

/// Parses a comma separated list of `a:b` pairs.
pub fn parse_poles(text: &str) -> Result<Vec<MobiusParam>> {
    text.split(',').map(|s| s.trim().parse()).collect()
}

/// `h(t) = (1/(n+1)) Σ_k α_k/(α_k t − β_k)` over `n+1` poles.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalH {
    poles: Vec<MobiusParam>,
}

impl RationalH {
    pub fn new(poles: Vec<MobiusParam>) -> Result<RationalH> {
        if poles.is_empty() {
            return Err(Error::Invalid("rational h needs at least one pole".into()));
        }
        Ok(RationalH { poles })
    }

    pub fn n(&self) -> usize {
        self.poles.len() - 1
    }

    pub fn poles(&self) -> &[MobiusParam] {
        &self.poles
    }

    /// `(h, h', …, h^{(m−1)})` at `t`, exactly.
    pub fn jets(&self, t: &Rational, m: usize) -> Result<JetPoint<Rational>> {
        let weight = Rational::new(One::one(), (self.poles.len() as i64).into());
        let mut values = Vec::with_capacity(m);
        for j in 0..m {
            let mut acc = Rational::zero();
            for p in &self.poles {
                acc += p.derivative(t, j as u32)?;
            }
            values.push(acc * &weight);
        }
        Ok(JetPoint::new(values))
    }

    pub fn jets_f64(&self, t: f64, m: usize) -> Result<Vec<f64>> {
        let weight = 1.0 / self.poles.len() as f64;
        (0..m)
            .map(|j| {
                let mut acc = 0.0;
                for p in &self.poles {
                    acc += p.derivative_f64(t, j as u32)?;
                }
                Ok(acc * weight)
            })
            .collect()
    }

    pub fn value_f64(&self, t: f64) -> Result<f64> {
        Ok(self.jets_f64(t, 1)?[0])
    }

    /// Chain state `(h, 𝒟_1, …, 𝒟_n)` at `t`, i.e. `x_1 = h`, `x_k = 𝒟_{k−1}`.
    pub fn chain_state(&self, t: &Rational, n: usize) -> Result<Vec<Rational>> {
        let jets = self.jets(t, n + 1)?;
        chain_from_jets(&jets.values, n)
    }

    pub fn chain_state_f64(&self, t: f64, n: usize) -> Result<Vec<f64>> {
        let jets = self.jets_f64(t, n + 1)?;
        chain_from_jets(&jets, n)
    }
}

/// `(y_1, 𝒟_1, …, 𝒟_n)` from jets of length at least `n + 1`.
pub fn chain_from_jets<T: Scalar>(jets: &[T], n: usize) -> Result<Vec<T>> {
    if jets.len() < n + 1 {
        return Err(Error::PointTooShort {
            len: jets.len(),
            needed: n + 1,
        });
    }
    let mut out = vec![jets[0].clone()];
    for d in compute_dk(n) {
        out.push(d.eval(jets)?);
    }
    Ok(out)
}

/// Exact jets `(h, …, h^{(m−1)})`.
pub fn rational_h_jets(r: &RationalH, t: &Rational, m: usize) -> Result<JetPoint<Rational>> {
    r.jets(t, m)
}

/// A point `(t, x_1, …, x_{n+1})` of a heat dynamical system.
#[derive(Clone, Debug, PartialEq)]
pub struct DynState<T> {
    pub t: T,
    pub x: Vec<T>,
}

impl<T> DynState<T> {
    pub fn new(t: T, x: Vec<T>) -> Self {
        DynState { t, x }
    }
}

/// Right-hand sides `p_2, …, p_{n+2}` of a heat dynamical system, top one already capped.
#[derive(Clone, Debug, PartialEq)]
pub struct HeatSystem {
    n: usize,
    rhs: Vec<GradedPoly>,
}

impl HeatSystem {
    pub fn from_spec(spec: &AnsatzSpec) -> HeatSystem {
        HeatSystem {
            n: spec.n(),
            rhs: spec.capped_rhs(),
        }
    }

    /// Reduced chain system with top polynomial `P_n`.
    pub fn reduced(n: usize, pn: &GradedPoly) -> Result<HeatSystem> {
        let spec = AnsatzSpec::reduced(n, crate::ansatz::Parity::Even, pn.clone())?;
        Ok(HeatSystem::from_spec(&spec))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n + 1
    }

    /// `x_1' = p_2 − x_1²`, `x_k' = p_{k+1} − 2k·x_1·x_k` for `k = 2..n+1`.
    pub fn field<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: x.len(),
            });
        }
        let tail = &x[1..];
        let x1 = x[0].clone();
        let mut out = Vec::with_capacity(x.len());
        out.push(self.rhs[0].eval(tail)? - x1.clone() * x1.clone());
        for k in 2..=self.n + 1 {
            let damp = T::from_int(2 * k as i64) * x1.clone() * x[k - 1].clone();
            out.push(self.rhs[k - 1].eval(tail)? - damp);
        }
        Ok(out)
    }
}

pub fn hds_vector_field<T: Scalar>(spec: &AnsatzSpec, s: &DynState<T>) -> Result<Vec<T>> {
    HeatSystem::from_spec(spec).field(&s.x)
}

pub fn rhds_vector_field<T: Scalar>(n: usize, pn: &GradedPoly, s: &DynState<T>) -> Result<Vec<T>> {
    HeatSystem::reduced(n, pn)?.field(&s.x)
}

/// Fixed-step RK4 samples.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn last(&self) -> Option<(f64, &[f64])> {
        Some((*self.times.last()?, self.states.last()?.as_slice()))
    }

    pub fn header(&self) -> Vec<String> {
        let dim = self.states.first().map_or(0, Vec::len);
        std::iter::once("t".to_string())
            .chain((1..=dim).map(|k| format!("x{k}")))
            .collect()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.times
            .iter()
            .zip(&self.states)
            .map(|(t, x)| std::iter::once(*t).chain(x.iter().copied()).collect())
            .collect()
    }

    /// Linear interpolation of the state at `t` inside the sampled range.
    pub fn state_at(&self, t: f64) -> Option<Vec<f64>> {
        let (lo, hi) = (self.times.first()?.min(*self.times.last()?), self.times.first()?.max(*self.times.last()?));
        if t < lo || t > hi {
            return None;
        }
        let forward = self.times.len() < 2 || self.times[1] >= self.times[0];
        let i = self
            .times
            .windows(2)
            .position(|w| if forward { w[0] <= t && t <= w[1] } else { w[1] <= t && t <= w[0] })
            .unwrap_or(0);
        if self.times.len() == 1 {
            return Some(self.states[0].clone());
        }
        let (t0, t1) = (self.times[i], self.times[i + 1]);
        let w = if t1 == t0 { 0.0 } else { (t - t0) / (t1 - t0) };
        Some(
            self.states[i]
                .iter()
                .zip(&self.states[i + 1])
                .map(|(a, b)| a + w * (b - a))
                .collect(),
        )
    }
}

fn check_state(t: f64, x: &[f64], guard: f64) -> Result<()> {
    if x.iter().any(|v| !v.is_finite() || v.abs() > guard) {
        return Err(Error::NonFinite { at: format!("t = {t}") });
    }
    Ok(())
}

/// Classical RK4 from `(t0, x0)` to `t_end` with step `step`; the last step is
/// shortened to land on `t_end`. Stops with [`Error::NonFinite`] once a component
/// leaves `[−guard, guard]`.
pub fn integrate_with_guard<F>(
    field: F,
    t0: f64,
    x0: &[f64],
    t_end: f64,
    step: f64,
    guard: f64,
) -> Result<Trajectory>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    if step <= 0.0 || !step.is_finite() {
        return Err(Error::Invalid(format!("step must be positive, got {step}")));
    }
    if !t0.is_finite() || !t_end.is_finite() {
        return Err(Error::Invalid("integration bounds must be finite".into()));
    }
    check_state(t0, x0, guard)?;
    let span = t_end - t0;
    let dir = span.signum();
    let full = (span.abs() / step).floor() as usize;
    let tol = 1e-9 * step;
    let mut times = vec![t0];
    let mut states = vec![x0.to_vec()];
    let mut x = x0.to_vec();
    let mut t = t0;
    let axpy = |x: &[f64], k: &[f64], h: f64| -> Vec<f64> {
        x.iter().zip(k).map(|(a, b)| a + h * b).collect()
    };
    let mut k = 0usize;
    loop {
        let remaining = (t_end - t).abs();
        if remaining <= tol {
            break;
        }
        let h = if k < full && remaining > step + tol { dir * step } else { t_end - t };
        let k1 = field(&x)?;
        let k2 = field(&axpy(&x, &k1, h / 2.0))?;
        let k3 = field(&axpy(&x, &k2, h / 2.0))?;
        let k4 = field(&axpy(&x, &k3, h))?;
        for i in 0..x.len() {
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        k += 1;
        t = if (t_end - (t + h)).abs() <= tol { t_end } else { t0 + dir * step * k as f64 };
        check_state(t, &x, guard)?;
        times.push(t);
        states.push(x.clone());
    }
    Ok(Trajectory { times, states })
}

pub fn integrate<F>(field: F, s0: &DynState<f64>, t_end: f64, step: f64) -> Result<Trajectory>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    integrate_with_guard(field, s0.t, &s0.x, t_end, step, DEFAULT_GUARD)
}

/// `𝒟_{n+1} − P_n(𝒟_1, …, 𝒟_{n−1})` at the jets; `P_n` may be written in
/// `x_k` (meaning `𝒟_{k−1}`) or directly in `D_k`.
pub fn ode_residual<T: Scalar>(n: usize, pn: &GradedPoly, jets: &[T]) -> Result<T> {
    if !matches!(pn.family(), Family::X | Family::D) {
        return Err(Error::WrongFamily {
            expected: Family::X,
            found: pn.family(),
        });
    }
    if jets.len() < n + 2 {
        return Err(Error::PointTooShort {
            len: jets.len(),
            needed: n + 2,
        });
    }
    let dk = compute_dk(n + 1);
    // both X and D place 𝒟_{p+1} at position p
    let slots: Vec<T> = dk[..n.saturating_sub(1)]
        .iter()
        .map(|d| d.eval(jets))
        .collect::<Result<_>>()?;
    let top = dk[n].eval(jets)?;
    Ok(top - pn.eval(&slots)?)
}

/// `y''' + 3yy'' + 3y'² + 3y²y'` at `(y, y', y'', y''')`.
pub fn chazy4_residual<T: Scalar>(y: &[T]) -> Result<T> {
    if y.len() < 4 {
        return Err(Error::PointTooShort {
            len: y.len(),
            needed: 4,
        });
    }
    let three = T::from_int(3);
    let (y0, y1, y2, y3) = (y[0].clone(), y[1].clone(), y[2].clone(), y[3].clone());
    Ok(y3 + three.clone() * y0.clone() * y2 + three.clone() * y1.clone() * y1.clone()
        + three * y0.clone() * y0 * y1)
}

/// `x_2(t) = −¼(α_1/(α_1t−β_1) − α_2/(α_2t−β_2))²` for a two-pole profile.
pub fn two_pole_x2(h: &RationalH, t: &Rational) -> Result<Rational> {
    if h.poles().len() != 2 {
        return Err(Error::Dimension {
            expected: 2,
            found: h.poles().len(),
        });
    }
    let a = h.poles()[0].derivative(t, 0)?;
    let b = h.poles()[1].derivative(t, 0)?;
    let d = a - b;
    Ok(-(&d * &d) / int(4))
}

/// Whether every `α_k t − β_k` with `α_k ≠ 0` is positive at `t`.
pub fn pole_bases_positive(h: &RationalH, t: &Rational) -> bool {
    h.poles()
        .iter()
        .filter(|p| !p.alpha().is_zero())
        .all(|p| (p.alpha() * t - p.beta()).is_positive())
}
