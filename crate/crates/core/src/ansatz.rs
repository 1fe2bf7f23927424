//! Coefficient recursions of the series ansatz
//! `ψ = exp(−½h z² + r)·(z^δ + Σ_{k≥2} Φ_k z^{2k+δ}/(2k+δ)!)`.
//!
//! Three descriptions of the coefficients `Φ_k` live here:
//!
//! * jet form `Y_k(y_1, …, y_k)`, valid for an arbitrary profile `h(t)`;
//! * the split `Y_k = −2^{k−2}(2+δ)(1+δ) Z_k + Q_k(Z_2, …, Z_{k−2})`;
//! * n-ansatz form `Φ_q(x_2, …, x_{n+1})` driven either by a heat dynamical
//!   system with right-hand sides `p_2, …, p_{n+2}` or by its reduced chain
//!   form with a single top polynomial `P_n`.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::grpoly::{Family, GradedPoly};
use crate::operators::{apply_lk, compute_dk, z_polys};
use crate::scalar::{int, rat, Rational};

/// Parity `δ` of a solution in `z`: `Even` is `δ = 0`, `Odd` is `δ = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn delta(self) -> i64 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn from_delta(delta: i64) -> Result<Parity> {
        match delta {
            0 => Ok(Parity::Even),
            1 => Ok(Parity::Odd),
            d => Err(Error::Invalid(format!("parity must be 0 or 1, got {d}"))),
        }
    }

    pub fn both() -> [Parity; 2] {
        [Parity::Even, Parity::Odd]
    }
}

/// `(2q+δ−3)(2q+δ−2) / (2(1+2δ))`, the weight of `Φ_2Φ_{q−2}` in the n-ansatz recursion.
fn product_weight(q: usize, parity: Parity) -> Rational {
    let d = parity.delta();
    let q = q as i64;
    rat((2 * q + d - 3) * (2 * q + d - 2), 2 * (1 + 2 * d))
}

/// `−2(1+2δ)`, the factor of `Φ_2` in front of `p_2`.
fn phi2_factor(parity: Parity) -> Rational {
    int(-2 * (1 + 2 * parity.delta()))
}

#[derive(Clone, Debug, PartialEq)]
pub enum AnsatzMode {
    /// `p_2, …, p_{n+2}` of a heat dynamical system.
    General { p: Vec<GradedPoly> },
    /// Top polynomial `P_n(x_2, …, x_n)` of a reduced system.
    Reduced { pn: GradedPoly },
}

/// Parameter count, parity and defining polynomials of an n-ansatz.
#[derive(Clone, Debug, PartialEq)]
pub struct AnsatzSpec {
    n: usize,
    parity: Parity,
    mode: AnsatzMode,
}

fn max_label(p: &GradedPoly) -> usize {
    match p.used_nvars() {
        0 => 0,
        used => p.family().label(used - 1),
    }
}

fn check_x_poly(p: &GradedPoly, what: &str, degree: i64, top_label: usize) -> Result<()> {
    p.expect_family(Family::X)?;
    if !p.degree().is(degree) {
        return Err(Error::Grading(format!(
            "{what} = {p} must be homogeneous of degree {degree}"
        )));
    }
    if max_label(p) > top_label {
        return Err(Error::Grading(format!(
            "{what} = {p} may only involve x_2..x_{top_label}"
        )));
    }
    Ok(())
}

/// Drops every monomial containing `x_label`, i.e. evaluates at `x_label = 0`.
fn cap(p: &GradedPoly, label: usize) -> GradedPoly {
    let Some(pos) = Family::X.position(label) else {
        return p.clone();
    };
    GradedPoly::from_terms(
        Family::X,
        p.terms()
            .into_iter()
            .filter(|(e, _)| e.get(pos).copied().unwrap_or(0) == 0)
            .map(|(e, c)| (e.to_vec(), c.clone())),
    )
    .with_nvars(pos)
}

impl AnsatzSpec {
    /// Heat dynamical system with `p = [p_2, …, p_{n+2}]`; `p_q` must be
    /// homogeneous of degree `−2q` in `x_2..x_q`.
    pub fn general(n: usize, parity: Parity, p: Vec<GradedPoly>) -> Result<AnsatzSpec> {
        if p.len() != n + 1 {
            return Err(Error::Dimension {
                expected: n + 1,
                found: p.len(),
            });
        }
        for (i, pq) in p.iter().enumerate() {
            let q = i + 2;
            check_x_poly(pq, &format!("p_{q}"), -2 * q as i64, q)?;
        }
        Ok(AnsatzSpec {
            n,
            parity,
            mode: AnsatzMode::General { p },
        })
    }

    /// Reduced system with top polynomial `P_n(x_2, …, x_n)` of degree `−2(n+2)`.
    pub fn reduced(n: usize, parity: Parity, pn: GradedPoly) -> Result<AnsatzSpec> {
        check_reduced_top(n, &pn)?;
        Ok(AnsatzSpec {
            n,
            parity,
            mode: AnsatzMode::Reduced { pn },
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn mode(&self) -> &AnsatzMode {
        &self.mode
    }

    pub fn with_parity(&self, parity: Parity) -> AnsatzSpec {
        AnsatzSpec {
            parity,
            ..self.clone()
        }
    }

    /// The right-hand sides `p_2, …, p_{n+2}` with `x_{n+2} = 0` applied to the last.
    /// A reduced spec is expanded into its chain form `p_k = x_k`, `p_{n+2} = P_n`.
    pub fn capped_rhs(&self) -> Vec<GradedPoly> {
        let top = self.n + 2;
        match &self.mode {
            AnsatzMode::General { p } => p
                .iter()
                .enumerate()
                .map(|(i, pq)| if i + 2 == top { cap(pq, top) } else { pq.clone() })
                .collect(),
            AnsatzMode::Reduced { pn } => {
                let mut out: Vec<GradedPoly> =
                    (2..=self.n + 1).map(|k| GradedPoly::var(Family::X, k)).collect();
                out.push(pn.clone());
                out
            }
        }
    }

    /// The table `Φ_0..Φ_{q_max}` from whichever recursion matches the mode.
    pub fn phi_table(&self, q_max: usize) -> Result<PhiTable> {
        match &self.mode {
            AnsatzMode::General { .. } => nansatz_phi(self, q_max),
            AnsatzMode::Reduced { pn } => reduced_phi(self.n, pn, self.parity, q_max),
        }
    }
}

fn check_reduced_top(n: usize, pn: &GradedPoly) -> Result<()> {
    check_x_poly(pn, &format!("P_{n}"), -2 * (n as i64 + 2), n)
}

/// `Φ_0, Φ_1, …` of one parity over the `Y` or `X` family.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiTable {
    parity: Parity,
    family: Family,
    entries: Vec<GradedPoly>,
}

impl PhiTable {
    pub fn new(parity: Parity, family: Family, entries: Vec<GradedPoly>) -> Result<PhiTable> {
        for e in &entries {
            e.expect_family(family)?;
        }
        Ok(PhiTable {
            parity,
            family,
            entries,
        })
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn entries(&self) -> &[GradedPoly] {
        &self.entries
    }

    pub fn get(&self, k: usize) -> Option<&GradedPoly> {
        self.entries.get(k)
    }

    /// Highest stored index.
    pub fn max_order(&self) -> usize {
        self.entries.len().saturating_sub(1)
    }

    /// Same table with entry 2 replaced; used to build broken inputs in tests.
    pub fn with_entry(&self, k: usize, p: GradedPoly) -> Result<PhiTable> {
        p.expect_family(self.family)?;
        let mut entries = self.entries.clone();
        if k >= entries.len() {
            return Err(Error::Invalid(format!("no entry {k} in table")));
        }
        entries[k] = p;
        Ok(PhiTable {
            entries,
            ..self.clone()
        })
    }

    /// One JSON polynomial per line.
    pub fn to_json_lines(&self) -> String {
        self.entries
            .iter()
            .map(|p| p.to_json() + "\n")
            .collect()
    }
}

impl fmt::Display for PhiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.entries {
            writeln!(f, "{p}")?;
        }
        Ok(())
    }
}

/// A time-dependent coefficient with exact values and derivatives at rational times.
pub trait TimeFunction {
    fn value(&self, t: &Rational) -> Result<Rational>;
    fn derivative(&self, t: &Rational) -> Result<Rational>;
}

type ExactClosure = Box<dyn Fn(&Rational) -> Result<Rational> + Send + Sync>;

/// [`TimeFunction`] assembled from a value closure and a derivative closure.
pub struct ExactFn {
    value: ExactClosure,
    derivative: ExactClosure,
}

impl ExactFn {
    pub fn new<V, D>(value: V, derivative: D) -> ExactFn
    where
        V: Fn(&Rational) -> Result<Rational> + Send + Sync + 'static,
        D: Fn(&Rational) -> Result<Rational> + Send + Sync + 'static,
    {
        ExactFn {
            value: Box::new(value),
            derivative: Box::new(derivative),
        }
    }

    /// `Σ c_i t^i`.
    pub fn polynomial(coeffs: Vec<Rational>) -> ExactFn {
        let deriv: Vec<Rational> = coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * int(i as i64))
            .collect();
        let horner = |cs: Vec<Rational>| {
            move |t: &Rational| {
                Ok(cs
                    .iter()
                    .rev()
                    .fold(Rational::zero(), |acc, c| acc * t + c))
            }
        };
        ExactFn::new(horner(coeffs), horner(deriv))
    }
}

impl TimeFunction for ExactFn {
    fn value(&self, t: &Rational) -> Result<Rational> {
        (self.value)(t)
    }

    fn derivative(&self, t: &Rational) -> Result<Rational> {
        (self.derivative)(t)
    }
}

/// Whether `ψ_k(t) = 2ψ'_{k−1}(t)` holds at every sample for every consecutive pair.
pub fn psi_recursion_check(coeffs: &[&dyn TimeFunction], t_samples: &[Rational]) -> Result<bool> {
    for t in t_samples {
        for k in 1..coeffs.len() {
            let lhs = coeffs[k].value(t)?;
            let rhs = coeffs[k - 1].derivative(t)? * int(2);
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `Y_0..Y_{k_max}` from `Y_k = 2𝓛_{k−1}Y_{k−1} − (2k+δ−2)(2k+δ−3)·Z_2·Y_{k−2}`.
pub fn compute_yk(parity: Parity, k_max: usize) -> PhiTable {
    let d = parity.delta();
    let z2 = compute_dk(1).remove(0);
    let mut entries = vec![GradedPoly::one(Family::Y), GradedPoly::zero(Family::Y)];
    for k in 2..=k_max {
        let ki = k as i64;
        let lifted = apply_lk(&int(ki - 1), &entries[k - 1])
            .expect("jet polynomial")
            .scale(&int(2));
        let c = int((2 * ki + d - 2) * (2 * ki + d - 3));
        let damp = (&z2 * &entries[k - 2]).scale(&c);
        entries.push(&lifted - &damp);
    }
    entries.truncate(k_max + 1);
    PhiTable {
        parity,
        family: Family::Y,
        entries,
    }
}

/// `Σ_j D_{j+1} ∂/∂D_j`.
///
/// With `Z_{j+1} = D_j` and `dZ_j/dt = Z_{j+1} − 2j·y_1·Z_j`, this is how
/// `𝓛_{m}` acts on a homogeneous polynomial of degree `−2m` in the `Z`'s.
fn shift(p: &GradedPoly) -> GradedPoly {
    let mut out = GradedPoly::zero(p.family());
    for pos in 0..p.used_nvars() {
        let d = p.partial(p.family().label(pos));
        if !d.is_zero() {
            out = &out + &(&GradedPoly::var(p.family(), p.family().label(pos + 1)) * &d);
        }
    }
    out
}

/// `Q_0..Q_{k_max}` over the `D` family (`D_j` is `Z_{j+1}`), with `Q_0 = Q_1 = Q_2 = Q_3 = 0` and
/// `Q_k = 2𝓛_{k−1}Q_{k−1} + (2k+δ−2)(2k+δ−3)·Z_2·(2^{k−4}(2+δ)(1+δ)Z_{k−2} − Q_{k−2})`.
pub fn compute_qk(parity: Parity, k_max: usize) -> Vec<GradedPoly> {
    let d = parity.delta();
    let z = |k: usize| GradedPoly::var(Family::D, k - 1);
    let mut out: Vec<GradedPoly> = (0..4.min(k_max + 1))
        .map(|_| GradedPoly::zero(Family::D))
        .collect();
    for k in 4..=k_max {
        let ki = k as i64;
        let lifted = shift(&out[k - 1]).scale(&int(2));
        let lead = z(k - 2).scale(&(int(2).pow(ki as i32 - 4) * int((2 + d) * (1 + d))));
        let c = int((2 * ki + d - 2) * (2 * ki + d - 3));
        let tail = (&z(2) * &(&lead - &out[k - 2])).scale(&c);
        out.push(&lifted + &tail);
    }
    out
}

/// Expands a `D`-family polynomial into jet variables via `D_j ↦ 𝒟_j`.
pub fn expand_d(p: &GradedPoly) -> Result<GradedPoly> {
    p.expect_family(Family::D)?;
    let images = compute_dk(p.used_nvars());
    p.substitute(&images, Family::Y)
}

/// n-ansatz table of a heat dynamical system:
/// `Φ_2 = −2(1+2δ)p_2`, `Φ_3 = 2p_3 ∂Φ_2/∂x_2`,
/// `Φ_q = 2Σ_{k=2}^{n+1} p_{k+1} ∂Φ_{q−1}/∂x_k + c_q Φ_2 Φ_{q−2}`,
/// with `x_{n+2} = 0` inside `p_{n+2}`.
pub fn nansatz_phi(spec: &AnsatzSpec, q_max: usize) -> Result<PhiTable> {
    let AnsatzMode::General { .. } = spec.mode else {
        return Err(Error::Invalid("nansatz_phi expects a general heat dynamical system".into()));
    };
    let parity = spec.parity;
    let n = spec.n;
    // rhs[i] = p_{i+2}
    let rhs = spec.capped_rhs();
    let mut entries = vec![GradedPoly::one(Family::X), GradedPoly::zero(Family::X)];
    if q_max >= 2 {
        entries.push(rhs[0].scale(&phi2_factor(parity)));
    }
    if q_max >= 3 {
        let p3 = rhs.get(1).cloned().unwrap_or_else(|| GradedPoly::zero(Family::X));
        entries.push((&p3 * &entries[2].partial(2)).scale(&int(2)));
    }
    for q in 4..=q_max {
        let mut lifted = GradedPoly::zero(Family::X);
        for k in 2..=n + 1 {
            let d = entries[q - 1].partial(k);
            if !d.is_zero() {
                lifted = &lifted + &(&rhs[k - 1] * &d);
            }
        }
        let prod = (&entries[2] * &entries[q - 2]).scale(&product_weight(q, parity));
        entries.push(&lifted.scale(&int(2)) + &prod);
    }
    entries.truncate(q_max + 1);
    Ok(PhiTable {
        parity,
        family: Family::X,
        entries: entries.into_iter().map(|p| p.with_nvars(n)).collect(),
    })
}

/// n-ansatz table of a reduced system:
/// `Φ_2 = −2(1+2δ)x_2`,
/// `Φ_q = 2(Σ_{k=2}^{n} x_{k+1}∂/∂x_k + P_n ∂/∂x_{n+1})Φ_{q−1} + c_q Φ_2 Φ_{q−2}`.
///
/// For `n = 0` the variable `x_2` is the top slot and is replaced by `P_0 = 0`.
pub fn reduced_phi(n: usize, pn: &GradedPoly, parity: Parity, q_max: usize) -> Result<PhiTable> {
    check_reduced_top(n, pn)?;
    let x = |k: usize| GradedPoly::var(Family::X, k);
    let derive = |p: &GradedPoly| -> GradedPoly {
        if n == 0 {
            return GradedPoly::zero(Family::X);
        }
        let mut out = &p.partial(n + 1) * pn;
        for k in 2..=n {
            let d = p.partial(k);
            if !d.is_zero() {
                out = &out + &(&x(k + 1) * &d);
            }
        }
        out
    };
    let mut entries = vec![GradedPoly::one(Family::X), GradedPoly::zero(Family::X)];
    if q_max >= 2 {
        let slot = if n == 0 { pn.clone() } else { x(2) };
        entries.push(slot.scale(&phi2_factor(parity)));
    }
    for q in 3..=q_max {
        let lifted = derive(&entries[q - 1]).scale(&int(2));
        let prod = (&entries[2] * &entries[q - 2]).scale(&product_weight(q, parity));
        entries.push(&lifted + &prod);
    }
    entries.truncate(q_max + 1);
    Ok(PhiTable {
        parity,
        family: Family::X,
        entries: entries.into_iter().map(|p| p.with_nvars(n)).collect(),
    })
}

/// Replaces every `x_k` by the jet polynomial `𝒟_{k−1}`.
pub fn substitute_x_by_d(p: &GradedPoly, k_max: usize) -> Result<GradedPoly> {
    p.expect_family(Family::X)?;
    if max_label(p) > k_max + 1 {
        return Err(Error::Invalid(format!(
            "{p} uses variables beyond x_{}",
            k_max + 1
        )));
    }
    let images = compute_dk(k_max);
    p.substitute(&images, Family::Y)
}

/// Jet form of the `Z`-split: `−2^{k−2}(2+δ)(1+δ)Z_k + Q_k` for `k ≥ 2`.
pub fn yk_from_split(parity: Parity, k: usize, qk: &GradedPoly) -> Result<GradedPoly> {
    let d = parity.delta();
    let zs = z_polys(k);
    let lead = zs[k].scale(&(-int(2).pow(k as i32 - 2) * int((2 + d) * (1 + d))));
    Ok(&lead + &expand_d(qk)?)
}
