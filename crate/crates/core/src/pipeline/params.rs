use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::PipelineError;

/// Closed interval around a real number, widened so that it contains the
/// exact value despite floating point rounding.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    fn around(x: f64) -> Self {
        let slack = 1e-9 * (1.0 + x.abs());
        Interval {
            lo: x - slack,
            hi: x + slack,
        }
    }

    fn add(self, o: Interval) -> Interval {
        Interval::around_pair(self.lo + o.lo, self.hi + o.hi)
    }

    fn sub(self, o: Interval) -> Interval {
        Interval::around_pair(self.lo - o.hi, self.hi - o.lo)
    }

    fn scale(self, k: f64) -> Interval {
        debug_assert!(k >= 0.0);
        Interval::around_pair(self.lo * k, self.hi * k)
    }

    fn around_pair(lo: f64, hi: f64) -> Interval {
        Interval {
            lo: Interval::around(lo).lo,
            hi: Interval::around(hi).hi,
        }
    }
}

/// Natural logarithm of a positive big integer.
fn ln_big(x: &BigUint) -> Interval {
    debug_assert!(!x.is_zero());
    let bits = x.bits();
    let shift = bits.saturating_sub(64);
    let top = (x >> shift).to_u64().expect("64 leading bits fit");
    Interval::around((top as f64).ln() + shift as f64 * std::f64::consts::LN_2)
}

fn ln_ratio(x: &BigRational) -> Option<Interval> {
    if !x.is_positive() {
        return None;
    }
    let num = x.numer().magnitude();
    let den = x.denom().magnitude();
    Some(ln_big(num).sub(ln_big(den)))
}

fn ceil_to_biguint(x: &BigRational) -> BigUint {
    let c = x.ceil().to_integer();
    c.to_biguint().unwrap_or_default()
}

pub(crate) fn rational(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Short decimal rendering: exact below 40 digits, otherwise the leading
/// digits and the digit count.
pub fn display_big(x: &BigUint) -> String {
    let s = x.to_string();
    if s.len() <= 40 {
        s
    } else {
        format!("{}...({} digits)", &s[..12], s.len())
    }
}

fn display_ratio(x: &BigRational) -> String {
    if x.denom().is_one() {
        return x.numer().to_string();
    }
    let num = x.numer().magnitude();
    let den = x.denom().magnitude();
    if num.bits() + den.bits() <= 120 {
        return format!("{}/{}", x.numer(), x.denom());
    }
    format!(
        "{}{}/{}",
        if x.is_negative() { "-" } else { "" },
        display_big(num),
        display_big(den)
    )
}

/// Converts a nonnegative rational to the nearest `f64`, also when numerator
/// and denominator do not fit into a float.
pub fn ratio_to_f64(x: &BigRational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let num = x.numer().magnitude();
    let den = x.denom().magnitude();
    let shift = |v: &BigUint| v.bits().saturating_sub(60);
    let (sn, sd) = (shift(num), shift(den));
    let n = (num >> sn).to_f64().unwrap();
    let d = (den >> sd).to_f64().unwrap();
    let sign = if x.is_negative() { -1.0 } else { 1.0 };
    sign * n / d * 2f64.powi(sn as i32 - sd as i32)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub holds: bool,
}

/// The constants of the induced Mader argument, derived from
/// `(s, eta, D, ell, m)`.
///
/// Exact quantities are big integers or rationals. `mu_ell` and `pi` are
/// astronomically large or small and are only kept as enclosures of their
/// natural logarithms.
#[derive(Clone, Debug, PartialEq)]
pub struct MaderParameters {
    pub s: u64,
    pub eta: BigRational,
    /// Maximum degree bound `D`.
    pub d_max: BigUint,
    pub a: u64,
    pub alpha: BigRational,
    pub gamma: BigRational,
    pub q: u64,
    pub big_q: u64,
    pub ell: u64,
    pub big_l: u64,
    pub big_c: BigUint,
    pub p: BigRational,
    pub c0: BigRational,
    /// `ln mu_ell`; `None` when `gamma <= 0` and `mu_ell` is not positive.
    pub ln_mu: Option<Interval>,
    /// `ln pi = -mu_ell / 8`.
    pub ln_pi: Option<Interval>,
    pub d0: BigUint,
    pub m: u64,
    pub girth_threshold: u64,
    pub conditions: Vec<Condition>,
    /// Names of the constants replaced by overrides.
    pub overridden: Vec<String>,
}

/// Replacements for derived constants, used by relaxed profiles.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaderOverrides {
    pub q: Option<u64>,
    pub big_q: Option<u64>,
    /// Sampling probability as `[numerator, denominator]`.
    pub p: Option<[u64; 2]>,
    pub d0: Option<u64>,
}

/// `(ell, m)` used for `K_{d+1}` with `D = d^43`.
pub fn mader_tuple(d: u64) -> (u64, u64) {
    match d {
        ..=4 => (205, 4814),
        5 => (136, 3423),
        _ => (113, 5000),
    }
}

impl MaderParameters {
    /// Derives every constant and evaluates the feasibility conditions
    /// without rejecting anything. Requires `s >= 3`, `eta > 0`,
    /// `D >= s - 1` and `ell >= 3`.
    pub fn compute(
        s: u64,
        eta: BigRational,
        d_max: BigUint,
        ell: u64,
        m: u64,
    ) -> Result<Self, PipelineError> {
        if s < 3 {
            return Err(PipelineError::Parameters(format!(
                "s must be at least 3, got {s}"
            )));
        }
        if !eta.is_positive() {
            return Err(PipelineError::Parameters(format!(
                "eta must be positive, got {eta}"
            )));
        }
        if d_max < BigUint::from(s - 1) {
            return Err(PipelineError::Parameters(format!(
                "D must be at least s - 1 = {}",
                s - 1
            )));
        }
        if ell < 3 {
            return Err(PipelineError::Parameters(format!(
                "ell must be at least 3, got {ell}"
            )));
        }
        let a = s - 1;
        let alpha = rational(s - 2, 2) + &eta / BigRational::from_integer(BigInt::from(4));
        let gamma = &alpha - BigRational::one();
        let q = 10 * a * a + a + 1;
        let big_q = 9 * q * q;
        let big_l = 4 * ell + 1;
        let big_c = BigUint::from(big_l + 1) * (&d_max + 1u32);
        let p = BigRational::new(BigInt::one(), BigInt::from(&big_c + 1u32));
        let spread = (&d_max + 2u32 - BigUint::from(s)) * d_max.pow(2 * ell as u32);
        let c0 = &eta / BigRational::from_integer(BigInt::from(spread * 4u32));
        let ln_mu = ln_ratio(&gamma).map(|lg| {
            let la = ln_ratio(&alpha).expect("alpha > 0");
            lg.add(la.scale((ell - 3) as f64))
                .sub(Interval::around(1.0))
                .sub(ln_big(&(&big_c + 1u32)))
        });
        let two = BigRational::from_integer(BigInt::from(2));
        let d0_rational = [
            &two / (&p * &c0),
            BigRational::from_integer(BigInt::from(d_max.pow(2 * ell as u32 + 1) * 2u32)),
            BigRational::from_integer(BigInt::from(big_q)),
            BigRational::from_integer(BigInt::from(d_max.clone())),
        ]
        .into_iter()
        .max()
        .unwrap();
        let d0 = ceil_to_biguint(&d0_rational);
        let girth_threshold = (12 * ell + 5).max(big_l * (2 * m + 2));
        let mut params = MaderParameters {
            s,
            eta,
            d_max,
            a,
            alpha,
            gamma,
            q,
            big_q,
            ell,
            big_l,
            big_c,
            p,
            c0,
            ln_mu,
            ln_pi: None,
            d0,
            m,
            girth_threshold,
            conditions: Vec::new(),
            overridden: Vec::new(),
        };
        params.evaluate();
        Ok(params)
    }

    /// Applies overrides and re-evaluates the conditions. The conditions are
    /// still reported, not enforced.
    pub fn with_overrides(mut self, ov: &MaderOverrides) -> Result<Self, PipelineError> {
        if let Some(q) = ov.q {
            self.q = q;
            self.overridden.push("q".into());
        }
        if let Some(big_q) = ov.big_q {
            self.big_q = big_q;
            self.overridden.push("Q".into());
        }
        if let Some([num, den]) = ov.p {
            if num == 0 || num >= den {
                return Err(PipelineError::Parameters(format!(
                    "p = {num}/{den} is not in (0, 1)"
                )));
            }
            self.p = rational(num, den);
            self.overridden.push("p".into());
        }
        if let Some(d0) = ov.d0 {
            self.d0 = BigUint::from(d0);
            self.overridden.push("D0".into());
        }
        self.evaluate();
        Ok(self)
    }

    fn evaluate(&mut self) {
        let mut conditions = Vec::new();
        let mut push = |name: &str, holds: bool| {
            conditions.push(Condition {
                name: name.to_string(),
                holds,
            })
        };
        // mu_ell / 8 from below, as a float; infinite when it overflows,
        // which is then a true lower bound direction for ">=" checks.
        let mu_lo = self.ln_mu.map(|l| l.lo.exp());
        self.ln_pi = self.ln_mu.map(|l| Interval {
            lo: -l.hi.exp() / 8.0,
            hi: -l.lo.exp() / 8.0,
        });
        push("gamma > 0", self.gamma.is_positive());
        push(
            "mu_ell >= 18Q",
            mu_lo.is_some_and(|mu| mu >= (18 * self.big_q) as f64 * (1.0 + 1e-9)),
        );
        let dep = ln_big(&(self.d_max.pow(12 * self.ell as u32 + 5) * 4u32 + 1u32))
            .add(Interval::around(1.0));
        push(
            "pi <= 1/(e(4D^(12ell+5)+1))",
            mu_lo.is_some_and(|mu| mu / 8.0 >= dep.hi),
        );
        let inv_pc0 = BigRational::one() / (&self.p * &self.c0);
        let rhs = ln_big(&(&self.d_max * 16u32))
            .add(Interval::around(1.0))
            .add(ln_ratio(&inv_pc0).expect("p c0 > 0"));
        push("2eD*pi < p*c0/8", mu_lo.is_some_and(|mu| mu / 8.0 > rhs.hi));
        let two = BigRational::from_integer(BigInt::from(2));
        let d0_floor = [
            ceil_to_biguint(&(&two * &inv_pc0)),
            self.d_max.pow(2 * self.ell as u32 + 1) * 2u32,
            BigUint::from(self.big_q),
            self.d_max.clone(),
        ]
        .into_iter()
        .max()
        .unwrap();
        push(
            "D0 >= max(2/(p*c0), 2D^(2ell+1), Q, D)",
            self.d0 >= d0_floor,
        );
        let lhs = (BigUint::from(self.q * self.q) - 1u32).pow(self.m as u32) * 2u32;
        let rhs = BigUint::from(11 * self.q * self.q) * &self.d0 * &self.d0;
        push("2(q^2-1)^m >= 11q^2*D0^2", lhs >= rhs);
        self.conditions = conditions;
    }

    pub fn feasible(&self) -> bool {
        self.conditions.iter().all(|c| c.holds)
    }

    pub fn violated(&self) -> Vec<String> {
        self.conditions
            .iter()
            .filter(|c| !c.holds)
            .map(|c| c.name.clone())
            .collect()
    }

    /// The sampling probability as a float for the random generator.
    pub fn p_f64(&self) -> f64 {
        ratio_to_f64(&self.p)
    }

    /// `(4ell+1)(2m+2)`, checked exactly.
    pub fn path_girth_product(&self) -> u64 {
        self.big_l * (2 * self.m + 2)
    }

    /// JSON summary with big values rendered as decimal strings.
    pub fn summary(&self) -> Value {
        let interval = |i: &Option<Interval>| i.map(|i| json!([i.lo, i.hi]));
        json!({
            "s": self.s,
            "eta": display_ratio(&self.eta),
            "D": display_big(&self.d_max),
            "a": self.a,
            "alpha": display_ratio(&self.alpha),
            "gamma": display_ratio(&self.gamma),
            "q": self.q,
            "Q": self.big_q,
            "ell": self.ell,
            "L": self.big_l,
            "C": display_big(&self.big_c),
            "p": display_ratio(&self.p),
            "c0": display_ratio(&self.c0),
            "ln_mu_ell": interval(&self.ln_mu),
            "ln_pi": interval(&self.ln_pi),
            "D0": display_big(&self.d0),
            "m": self.m,
            "girth_threshold": self.girth_threshold,
            "conditions": self.conditions,
            "overridden": self.overridden,
        })
    }
}

/// Derives the constants and rejects the tuple unless every feasibility
/// condition holds. Requires `s >= 4`.
pub fn mader_parameters(
    s: u64,
    eta: BigRational,
    d_max: BigUint,
    ell: u64,
    m: u64,
) -> Result<MaderParameters, PipelineError> {
    if s < 4 {
        return Err(PipelineError::Parameters(format!(
            "s must be at least 4, got {s}"
        )));
    }
    let params = MaderParameters::compute(s, eta, d_max, ell, m)?;
    if params.feasible() {
        Ok(params)
    } else {
        Err(PipelineError::Infeasible {
            violated: params.violated(),
        })
    }
}

/// Parameters for `K_{d+1}` with `eta = 1/20`, `D = d^43` and the tuple from
/// [`mader_tuple`].
pub fn default_mader_parameters(d: u64) -> Result<MaderParameters, PipelineError> {
    let (ell, m) = mader_tuple(d);
    mader_parameters(d + 1, rational(1, 20), BigUint::from(d).pow(43), ell, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_tuples_are_feasible() {
        for (d, threshold) in [(4, 7_906_230), (5, 3_732_160), (6, 4_530_906)] {
            let p = default_mader_parameters(d).unwrap();
            assert!(p.feasible(), "d={d}: {:?}", p.violated());
            assert_eq!(p.girth_threshold, threshold);
            assert!(p.path_girth_product() < 8_000_000);
        }
    }

    #[test]
    fn q_for_s_four() {
        let p = MaderParameters::compute(4, rational(1, 20), BigUint::from(3u32), 5, 1).unwrap();
        assert_eq!((p.a, p.q, p.big_q), (3, 94, 79_524));
    }

    #[test]
    fn small_ell_is_reported() {
        let err = mader_parameters(5, rational(1, 20), BigUint::from(4u32).pow(43), 50, 4814)
            .unwrap_err();
        match err {
            PipelineError::Infeasible { violated } => {
                assert!(violated.contains(&"mu_ell >= 18Q".to_string()))
            }
            other => panic!("{other:?}"),
        }
        assert!(mader_parameters(3, rational(1, 20), BigUint::from(4u32), 5, 1).is_err());
    }

    #[test]
    fn overrides_replace_constants() {
        let p = MaderParameters::compute(3, rational(1, 20), BigUint::from(12u32), 3, 1)
            .unwrap()
            .with_overrides(&MaderOverrides {
                q: Some(2),
                big_q: Some(3),
                p: Some([9, 10]),
                d0: Some(40),
            })
            .unwrap();
        assert_eq!((p.q, p.big_q), (2, 3));
        assert!((p.p_f64() - 0.9).abs() < 1e-12);
        assert!(!p.feasible());
        assert!(p
            .conditions
            .iter()
            .any(|c| c.name == "gamma > 0" && !c.holds));
    }

    #[test]
    fn logs_of_big_numbers() {
        let x = BigUint::from(10u32).pow(500);
        let l = ln_big(&x);
        let exact = 500.0 * std::f64::consts::LN_10;
        assert!(l.lo <= exact && exact <= l.hi);
        assert!(
            (ratio_to_f64(&BigRational::new(
                BigInt::from(x.clone()),
                BigInt::from(x * 4u32)
            )) - 0.25)
                .abs()
                < 1e-15
        );
    }
}
