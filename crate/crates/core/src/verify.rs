//! Self-checks run by `heat-ansatz verify`.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ansatz::{compute_qk, compute_yk, reduced_phi, yk_from_split, AnsatzSpec, Parity};
use crate::dynsys::{chazy4_residual, integrate, ode_residual, DynState, HeatSystem, MobiusParam, RationalH};
use crate::error::{Error, Result};
use crate::grpoly::{homogeneous_monomials, Family, GradedPoly};
use crate::operators::{apply_annihilator, apply_euler, commutator_defect, compute_dk, decompose_basis};
use crate::scalar::{int, rat, Rational};
use crate::solution::{
    assemble_psi, burgers_residual_series, closed_form_0ansatz, cole_hopf, gamma_phi_table,
    heat_residual_numeric,
    heat_residual_series, GridSpec, HSource,
};

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Check {
        Check {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        }
    }

    fn from_result(name: &str, r: Result<(bool, String)>) -> Check {
        match r {
            Ok((passed, detail)) => Check::new(name, passed, detail),
            Err(e) => Check::new(name, false, format!("error: {e}")),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Operators,
    Ansatz,
    Dynsys,
    Solution,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        match s {
            "operators" => Ok(Suite::Operators),
            "ansatz" => Ok(Suite::Ansatz),
            "dynsys" => Ok(Suite::Dynsys),
            "solution" => Ok(Suite::Solution),
            "all" => Ok(Suite::All),
            other => Err(Error::Parse(format!("unknown suite {other:?}"))),
        }
    }
}

pub fn run_suite(suite: Suite) -> Vec<Check> {
    match suite {
        Suite::Operators => operators_suite(),
        Suite::Ansatz => ansatz_suite(),
        Suite::Dynsys => dynsys_suite(),
        Suite::Solution => solution_suite(),
        Suite::All => [operators_suite(), ansatz_suite(), dynsys_suite(), solution_suite()].concat(),
    }
}

/// Random polynomial with small integer coefficients, homogeneous of degree `−2·weight` in `y_1..y_nvars`.
pub fn random_homogeneous<R: Rng>(rng: &mut R, weight: u32, nvars: usize) -> GradedPoly {
    let monomials = homogeneous_monomials(Family::Y, weight, nvars);
    let terms = monomials.into_iter().filter_map(|e| {
        let c: i64 = rng.gen_range(-5..=5);
        (c != 0).then(|| (e, int(c)))
    });
    GradedPoly::from_terms(Family::Y, terms).with_nvars(nvars)
}

fn operators_suite() -> Vec<Check> {
    let dk = compute_dk(12);
    let killed = dk.iter().all(|d| apply_annihilator(d).map(|p| p.is_zero()).unwrap_or(false));
    let mut out = vec![Check::new("annihilator kills D_1..D_12", killed, "exact")];

    let graded = dk.iter().enumerate().all(|(i, d)| {
        apply_euler(d).map(|e| e == d.scale(&int(-2 * (i as i64 + 2)))).unwrap_or(false)
    });
    out.push(Check::new("Euler operator reads the degree of D_k", graded, "k = 1..12"));

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut failures = 0usize;
    let trials = 100;
    for _ in 0..trials {
        let weight = rng.gen_range(1..=10);
        let p = random_homogeneous(&mut rng, weight, weight as usize);
        let k = rat(rng.gen_range(-6..=6), rng.gen_range(1..=3));
        if !commutator_defect(&k, &p).map(|d| d.is_zero()).unwrap_or(false) {
            failures += 1;
        }
    }
    out.push(Check::new(
        "commutator [annihilator, L_k] = 2k + Euler",
        failures == 0,
        format!("{} of {trials} random polynomials fail", failures),
    ));

    let round_trip = (|| -> Result<bool> {
        let p = &(&dk[0] * &dk[2]) + &dk[1].pow(2).scale(&rat(-3, 2));
        let basis = decompose_basis(&p)?;
        Ok(basis.expand() == p && !basis.has_y1_factor())
    })();
    out.push(Check::from_result(
        "basis decomposition round trip",
        round_trip.map(|ok| (ok, "D_1 D_3 - 3/2 D_2^2".to_string())),
    ));
    out
}

fn ansatz_suite() -> Vec<Check> {
    let mut out = Vec::new();
    for parity in Parity::both() {
        let y = compute_yk(parity, 12);
        let ok = y
            .entries()
            .iter()
            .all(|p| apply_annihilator(p).map(|a| a.is_zero()).unwrap_or(false));
        out.push(Check::new(
            &format!("Y_k annihilated (delta = {})", parity.delta()),
            ok,
            "k = 0..12",
        ));
        let q = compute_qk(parity, 10);
        let y10 = compute_yk(parity, 10);
        let split = (2..=10).all(|k| {
            yk_from_split(parity, k, &q[k]).map(|p| Some(&p) == y10.get(k)).unwrap_or(false)
        });
        out.push(Check::new(
            &format!("Y_k = lead Z_k + Q_k (delta = {})", parity.delta()),
            split,
            "k = 2..10",
        ));
        let gamma = (|| -> Result<bool> {
            let recursion = reduced_phi(1, &GradedPoly::zero(Family::X), parity, 20)?;
            Ok(gamma_phi_table(parity, 20) == recursion.entries())
        })();
        out.push(Check::from_result(
            &format!("1-ansatz Gamma series equals recursion (delta = {})", parity.delta()),
            gamma.map(|ok| (ok, "m <= 10".to_string())),
        ));
    }
    out
}

fn sample_times(poles: &RationalH, count: usize) -> Vec<Rational> {
    let bad: Vec<Rational> = poles.poles().iter().filter_map(MobiusParam::pole).collect();
    (1..)
        .map(|i| rat(7 * i + 3, 5))
        .filter(|t| !bad.contains(t))
        .take(count)
        .collect()
}

fn mobius(a: i64, b: i64) -> MobiusParam {
    MobiusParam::new(int(a), int(b)).expect("nonzero pair")
}

/// Endpoint error of RK4 on the 1-ansatz chain system from `t = 2` to `t = 3` for
/// `h = ½(1/t + 1/(t−1))`, against the closed form.
pub fn rk4_endpoint_error(step: f64) -> Result<f64> {
    let h = RationalH::new(vec![mobius(1, 0), mobius(1, 1)])?;
    let sys = HeatSystem::reduced(1, &GradedPoly::zero(Family::X))?;
    let x0 = h.chain_state_f64(2.0, 1)?;
    let tr = integrate(|x: &[f64]| sys.field(x), &DynState::new(2.0, x0), 3.0, step)?;
    let mut worst = 0.0f64;
    for (t, x) in tr.times.iter().zip(&tr.states) {
        let exact = h.chain_state_f64(*t, 1)?;
        for (a, b) in x.iter().zip(&exact) {
            worst = worst.max((a - b).abs());
        }
    }
    Ok(worst)
}

fn dynsys_suite() -> Vec<Check> {
    let mut out = Vec::new();
    let zero = GradedPoly::zero(Family::X);
    let cases = [
        (0usize, RationalH::new(vec![mobius(3, 2)])),
        (1, RationalH::new(vec![mobius(1, 0), mobius(1, 1)])),
        (1, RationalH::new(vec![mobius(2, -1), mobius(-1, 4)])),
    ];
    for (n, h) in cases {
        let r = h.and_then(|h| {
            let mut worst = Rational::zero();
            for t in sample_times(&h, 20) {
                let jets = h.jets(&t, n + 2)?;
                let v = ode_residual(n, &zero, &jets.values)?;
                if v.abs() > worst {
                    worst = v.abs();
                }
            }
            Ok((worst.is_zero(), format!("max |residual| = {worst}")))
        });
        out.push(Check::from_result(&format!("rational h solves the n = {n} equation"), r));
    }
    let chazy = RationalH::new(vec![mobius(1, 0), mobius(1, 1)]).and_then(|h| {
        for t in sample_times(&h, 20) {
            let y: Vec<Rational> = h.jets(&t, 4)?.values.iter().map(|v| v * int(2)).collect();
            if !chazy4_residual(&y)?.is_zero() {
                return Ok((false, format!("nonzero at t = {t}")));
            }
        }
        Ok((true, "20 rational points".to_string()))
    });
    out.push(Check::from_result("y = 2h solves Chazy-4", chazy));
    let rk = rk4_endpoint_error(1e-3).map(|e| (e <= 1e-8, format!("max error {e:.3e} at step 1e-3")));
    out.push(Check::from_result("RK4 tracks the closed form", rk));
    out
}

fn solution_suite() -> Vec<Check> {
    let mut out = Vec::new();
    let zero = GradedPoly::zero(Family::X);
    for parity in Parity::both() {
        for (n, poles) in [(0usize, vec![mobius(1, 0)]), (1, vec![mobius(1, 0), mobius(1, 1)])] {
            let r = (|| -> Result<(bool, String)> {
                let h = RationalH::new(poles.clone())?;
                let times = sample_times(&h, 10);
                let spec = AnsatzSpec::reduced(n, parity, zero.clone())?;
                let s = assemble_psi(&spec, HSource::Rational(h), int(0), 10)?;
                let heat = heat_residual_series(&s, &times)?;
                let b = cole_hopf(&s)?;
                let burgers = burgers_residual_series(&b, &times)?;
                Ok((
                    heat.is_zero() && burgers.is_zero(),
                    format!("heat {heat}, Burgers {burgers}"),
                ))
            })();
            out.push(Check::from_result(
                &format!("exact residuals n = {n}, delta = {}", parity.delta()),
                r,
            ));
        }
        let grid = GridSpec {
            t_min: 1.0,
            t_max: 2.0,
            ..GridSpec::standard(1e-3)
        };
        let fd = heat_residual_numeric(&closed_form_0ansatz(parity, mobius(1, 0), int(0)), &grid)
            .map(|r| (r <= 1e-5, format!("max {r:.3e} on z in [-1, 1], t in [1, 2]")));
        out.push(Check::from_result(
            &format!("finite-difference heat residual of the 0-ansatz (delta = {})", parity.delta()),
            fd,
        ));
    }
    out
}
