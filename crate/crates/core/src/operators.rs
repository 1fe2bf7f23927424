//! Derivations on polynomials in the jet variables `y_k = h^(k-1)(t)`.
//!
//! * `𝓛_k = Σ_s y_{s+1} ∂/∂y_s + 2k·y_1` (time derivative twisted by `h`),
//! * the annihilator `𝓛 = ∂/∂y_1 − Σ_s (s+1)s·y_s ∂/∂y_{s+1}`,
//! * the Euler operator `ℰ = −2 Σ_s s·y_s ∂/∂y_s`,
//!
//! together with the differential polynomials `𝒟_1 = 𝓛_{1/2} y_1`,
//! `𝒟_k = 𝓛_k 𝒟_{k-1}` (written `Z_{k+1}` elsewhere) and the rewrite of any
//! homogeneous jet polynomial in the multiplicative basis `y_1, Z_2, Z_3, …`.

use std::fmt;

use crate::error::{Error, Result};
use crate::grpoly::{Degree, Family, GradedPoly};
use crate::scalar::{int, rat, Rational};

fn y(k: usize) -> GradedPoly {
    GradedPoly::var(Family::Y, k)
}

/// `d/dt` acting on jet polynomials: `Σ_s y_{s+1} ∂/∂y_s`.
pub fn total_derivative(p: &GradedPoly) -> Result<GradedPoly> {
    p.expect_family(Family::Y)?;
    let used = p.used_nvars();
    let mut out = GradedPoly::zero(Family::Y).with_nvars(p.nvars().max(used + 1));
    for s in 1..=used {
        let d = p.partial(s);
        if !d.is_zero() {
            out = &out + &(&y(s + 1) * &d);
        }
    }
    Ok(out)
}

/// `𝓛_k P = Σ_s y_{s+1} ∂P/∂y_s + 2k·y_1·P`.
pub fn apply_lk(k: &Rational, p: &GradedPoly) -> Result<GradedPoly> {
    let dt = total_derivative(p)?;
    let twist = (&y(1) * p).scale(&(k * int(2)));
    Ok(&dt + &twist)
}

/// `𝓛 P = ∂P/∂y_1 − Σ_s (s+1)s·y_s ∂P/∂y_{s+1}`.
pub fn apply_annihilator(p: &GradedPoly) -> Result<GradedPoly> {
    p.expect_family(Family::Y)?;
    let mut out = p.partial(1);
    for s in 1..p.used_nvars() {
        let d = p.partial(s + 1);
        if d.is_zero() {
            continue;
        }
        let c = int(((s + 1) * s) as i64);
        out = &out - &(&y(s) * &d).scale(&c);
    }
    Ok(out.with_nvars(p.nvars()))
}

/// `ℰ P = −2 Σ_s s·y_s ∂P/∂y_s`; on homogeneous `P` of degree `d` this is `d·P`.
pub fn apply_euler(p: &GradedPoly) -> Result<GradedPoly> {
    p.expect_family(Family::Y)?;
    Ok(p.euler())
}

/// `𝒟_1, …, 𝒟_{k_max}`; `𝒟_k` is homogeneous of degree `−2(k+1)` in `y_1..y_{k+1}`.
pub fn compute_dk(k_max: usize) -> Vec<GradedPoly> {
    let mut out = Vec::with_capacity(k_max);
    if k_max == 0 {
        return out;
    }
    let mut cur = apply_lk(&rat(1, 2), &y(1)).expect("y_1 is a jet polynomial");
    out.push(cur.clone());
    for k in 2..=k_max {
        cur = apply_lk(&int(k as i64), &cur).expect("jet polynomial");
        out.push(cur.clone());
    }
    out
}

/// `Z_0, Z_1, …, Z_m` with the convention `Z_0 = Z_1 = 0` and `Z_{k+1} = 𝒟_k`.
pub fn z_polys(m: usize) -> Vec<GradedPoly> {
    let mut out = vec![GradedPoly::zero(Family::Y), GradedPoly::zero(Family::Y)];
    out.extend(compute_dk(m.saturating_sub(1)));
    out.truncate(m + 1);
    out
}

/// A jet polynomial rewritten as a polynomial in `y_1, Z_2, …, Z_m`.
///
/// Stored as a `Y`-family polynomial whose position-0 variable is `y_1` and
/// whose label-`k` variable (`k ≥ 2`) stands for `Z_k`; both carry degree `−2k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisDecomposition {
    poly: GradedPoly,
}

impl BasisDecomposition {
    pub fn as_poly(&self) -> &GradedPoly {
        &self.poly
    }

    /// Coefficient of `y_1^{e_1} Z_2^{e_2} …`.
    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.poly.coefficient(exps)
    }

    /// True when some monomial carries a factor `y_1`.
    pub fn has_y1_factor(&self) -> bool {
        self.poly.terms().iter().any(|(e, _)| e.first().copied().unwrap_or(0) > 0)
    }

    /// Substitutes the jet expansions of `Z_k` back.
    pub fn expand(&self) -> GradedPoly {
        let m = self.poly.used_nvars();
        let mut images = z_polys(m.max(1));
        images[1] = y(1);
        images.remove(0);
        self.poly
            .substitute(&images, Family::Y)
            .expect("basis images are jet polynomials")
    }
}

impl fmt::Display for BasisDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = self.poly.to_string();
        let mut out = String::with_capacity(text.len());
        let mut chars = text.chars().peekable();
        while let Some(c) = chars.next() {
            if c == 'y' && chars.peek() == Some(&'_') {
                chars.next();
                let mut label = String::new();
                while let Some(d) = chars.peek().copied().filter(char::is_ascii_digit) {
                    label.push(d);
                    chars.next();
                }
                if label == "1" {
                    out.push_str("y_1");
                } else {
                    out.push_str("Z_");
                    out.push_str(&label);
                }
            } else {
                out.push(c);
            }
        }
        f.write_str(&out)
    }
}

/// Unique rewrite of a homogeneous jet polynomial in the basis `y_1, Z_2, …`.
///
/// `Z_k = y_k + (terms in y_1..y_{k-1})`, so under the graded-lex order whose
/// tie-break starts from the highest variable the leading monomial of
/// `y_1^{a_1} Z_2^{a_2} ⋯ Z_m^{a_m}` is `y_1^{a_1} y_2^{a_2} ⋯ y_m^{a_m}`.
/// Repeatedly cancelling the leading term therefore terminates and is unique.
pub fn decompose_basis(p: &GradedPoly) -> Result<BasisDecomposition> {
    p.expect_family(Family::Y)?;
    if p.degree() == Degree::NonHomogeneous {
        return Err(Error::NonHomogeneous);
    }
    let m = p.used_nvars();
    let mut images = z_polys(m.max(1));
    images[1] = y(1);
    images.remove(0);
    let mut rest = p.clone();
    let mut out = GradedPoly::zero(Family::Y).with_nvars(m);
    while let Some((exps, c)) = rest.leading_term() {
        let exps = exps.to_vec();
        let c = c.clone();
        let basis_monomial = GradedPoly::monomial(Family::Y, &exps, c.clone());
        let expanded = basis_monomial.substitute(&images, Family::Y)?;
        rest = &rest - &expanded;
        out = &out + &basis_monomial;
    }
    Ok(BasisDecomposition { poly: out })
}

/// Whether `P` lies in the kernel of the annihilator, i.e. is a polynomial in
/// `𝒟_1, 𝒟_2, …` alone.
pub fn check_br_form(p: &GradedPoly) -> Result<bool> {
    p.expect_family(Family::Y)?;
    if p.degree() == Degree::NonHomogeneous {
        return Err(Error::NonHomogeneous);
    }
    Ok(apply_annihilator(p)?.is_zero())
}

/// `[𝓛, 𝓛_k] P − (2k + ℰ) P`; identically zero.
pub fn commutator_defect(k: &Rational, p: &GradedPoly) -> Result<GradedPoly> {
    let lhs = &apply_annihilator(&apply_lk(k, p)?)? - &apply_lk(k, &apply_annihilator(p)?)?;
    let rhs = &p.scale(&(k * int(2))) + &apply_euler(p)?;
    Ok(&lhs - &rhs)
}
