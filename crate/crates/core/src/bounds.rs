//! Exact densities and the numeric bound formulas for extremal group orders.
//!
//! All values are exact rationals. Bounds that only hold asymptotically are
//! flagged, and bounds whose constant is not a concrete number (an `o(1)`
//! term or an unspecified absolute constant) are reported as formula text
//! only — no invented numeric substitution.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::lattice::Lattice;
use crate::rational::Rat;
use crate::shapes::{binomial, PointSet};

/// Exact lattice packing density of the n-simplex, where known (n <= 3).
pub fn simplex_packing_density(n: usize) -> Option<Rat> {
    match n {
        1 => Some(Rat::one()),
        2 => Some(Rat::frac(2, 3).unwrap()),
        3 => Some(Rat::frac(18, 49).unwrap()),
        _ => None,
    }
}

/// Exact lattice covering density of the n-simplex, where known (n <= 2).
pub fn simplex_covering_density(n: usize) -> Option<Rat> {
    match n {
        1 => Some(Rat::one()),
        2 => Some(Rat::frac(3, 2).unwrap()),
        _ => None,
    }
}

fn factorial(k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=k {
        acc *= i;
    }
    acc
}

fn bigpow(base: i128, exp: usize) -> BigInt {
    num_traits::pow::pow(BigInt::from(base), exp)
}

/// `|S| / det(L)`, the density of the arrangement `(S, L)`.
pub fn density(points: &PointSet, lattice: &Lattice) -> Result<Rat> {
    Rat::frac(points.len() as i128, lattice.det()?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RatioKind {
    Packing,
    Covering,
}

/// Extremal discrete density `C(h+n, n) / value` for a known extremal group
/// order (packing density for phi values, covering density for psi values).
pub fn discrete_density_ratio(_kind: RatioKind, h: u32, n: usize, value: i128) -> Result<Rat> {
    let card = binomial(h as i128 + n as i128, n as i128)?;
    Rat::frac(card, value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundRole {
    LowerBound,
    UpperBound,
    ExactValue,
    LimitValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub id: String,
    /// Quantity the bound speaks about.
    pub target: String,
    pub role: BoundRole,
    pub formula: String,
    /// Exact value; absent for symbolic-only bounds.
    pub value: Option<Rat>,
    /// `ceil(value)` for lower bounds compared against integer group orders.
    pub ceiled: Option<i128>,
    pub strict: bool,
    /// Claimed only in the limit / for all large h.
    pub asymptotic: bool,
    /// Contains an o(1) term or unspecified constant; `value` is absent.
    pub symbolic: bool,
    /// False when (h, n) violates the bound's validity condition; the value
    /// is still evaluated for reference.
    pub applicable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsTable {
    pub h: u32,
    pub n: usize,
    pub entries: Vec<BoundEntry>,
}

impl BoundsTable {
    pub fn entry(&self, id: &str) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("bounds for h={}, n={}\n", self.h, self.n);
        for e in &self.entries {
            let value = match (&e.value, e.symbolic) {
                (Some(v), _) => v.to_string(),
                (None, true) => "(symbolic)".to_string(),
                (None, false) => "-".to_string(),
            };
            let ceiled = e.ceiled.map(|c| format!(" ceil={c}")).unwrap_or_default();
            let mut flags = Vec::new();
            if e.strict {
                flags.push("strict");
            }
            if e.asymptotic {
                flags.push("asymptotic");
            }
            if !e.applicable {
                flags.push("not-applicable-here");
            }
            let flags =
                if flags.is_empty() { String::new() } else { format!(" [{}]", flags.join(",")) };
            out.push_str(&format!(
                "  {:<34} {:<12} {:<24} = {}{}{}\n    {}\n",
                e.id,
                format!("{:?}", e.role),
                e.target,
                value,
                ceiled,
                flags,
                e.formula
            ));
        }
        out
    }
}

/// The difference-body coefficient `(2n)! / (2^n (n!)^3)`.
fn diffbody_coefficient(n: usize) -> Result<Rat> {
    let num = factorial(2 * n);
    let den = bigpow(2, n) * num_traits::pow::pow(factorial(n), 3);
    Rat::from_bigints(num, den)
}

/// Evaluate every applicable bound at `(h, n)`.
pub fn bounds_report(h: u32, n: usize) -> Result<BoundsTable> {
    let mut entries = Vec::new();
    let hn = Rat::int(h as i128).pow(n as u32);

    // phi(h,n) >= C(h+n,n): a packing needs at least as many cosets as the
    // simplex has points.
    let card = binomial(h as i128 + n as i128, n as i128)?;
    entries.push(BoundEntry {
        id: "simplex-cardinality-lower".into(),
        target: "phi(h,n)".into(),
        role: BoundRole::LowerBound,
        formula: "C(h+n, n)".into(),
        value: Some(Rat::int(card)),
        ceiled: Some(card),
        strict: false,
        asymptotic: false,
        symbolic: false,
        applicable: true,
    });
    entries.push(BoundEntry {
        id: "simplex-cardinality-upper".into(),
        target: "psi(h,n)".into(),
        role: BoundRole::UpperBound,
        formula: "C(h+n, n)".into(),
        value: Some(Rat::int(card)),
        ceiled: None,
        strict: false,
        asymptotic: false,
        symbolic: false,
        applicable: true,
    });

    // Lower bound from the volume of the difference body, valid for
    // h >= 2n-2.
    let shifted = BigInt::from(h as i128 - 2 * n as i128 + 2);
    let diff_low = &diffbody_coefficient(n)?
        * &Rat::from_bigints(num_traits::pow::pow(shifted, n), BigInt::one())?;
    entries.push(BoundEntry {
        id: "diffbody-lower".into(),
        target: "phi(h,n)".into(),
        role: BoundRole::LowerBound,
        formula: "(2n)!/(2^n (n!)^3) * (h-2n+2)^n".into(),
        ceiled: Some(diff_low.ceil_i128()?),
        value: Some(diff_low),
        strict: true,
        asymptotic: false,
        symbolic: false,
        applicable: h as usize + 2 >= 2 * n,
    });

    // Trivial upper bound (h+1)^n.
    let power_up = Rat::int(h as i128 + 1).pow(n as u32);
    entries.push(BoundEntry {
        id: "power-upper".into(),
        target: "phi(h,n)".into(),
        role: BoundRole::UpperBound,
        formula: "(h+1)^n".into(),
        value: Some(power_up),
        ceiled: None,
        strict: false,
        asymptotic: false,
        symbolic: false,
        applicable: true,
    });

    // Fixed-h, large-n regime: phi > (n+1-ceil(h/2))^h / (ceil(h/2)! floor(h/2)!),
    // valid for 1 <= h/2 <= n+1.
    let half_up = h.div_ceil(2) as usize;
    let half_down = (h / 2) as usize;
    let base = n as i128 + 1 - half_up as i128;
    let fixed_h = Rat::from_bigints(
        bigpow(base, h as usize),
        factorial(half_up) * factorial(half_down),
    )?;
    entries.push(BoundEntry {
        id: "fixed-h-lower".into(),
        target: "phi(h,n)".into(),
        role: BoundRole::LowerBound,
        formula: "(n+1-ceil(h/2))^h / (ceil(h/2)! floor(h/2)!)".into(),
        ceiled: Some(fixed_h.ceil_i128()?),
        value: Some(fixed_h),
        strict: true,
        asymptotic: false,
        symbolic: false,
        applicable: 2 <= h && h as usize <= 2 * n + 2,
    });

    // Exact simplex packing density and its consequences.
    if let Some(delta) = simplex_packing_density(n) {
        entries.push(BoundEntry {
            id: "simplex-packing-density".into(),
            target: format!("delta_L(simplex^{n})"),
            role: BoundRole::ExactValue,
            formula: "known exact value, n <= 3".into(),
            value: Some(delta.clone()),
            ceiled: None,
            strict: false,
            asymptotic: false,
            symbolic: false,
            applicable: true,
        });
        let factor = (&Rat::from_bigints(factorial(n), BigInt::one())? * &delta).recip()?;
        let scaled = &hn * &factor;
        entries.push(BoundEntry {
            id: "scaled-density-lower".into(),
            target: "phi(h,n)".into(),
            role: BoundRole::LowerBound,
            formula: "h^n / (n! delta_L(simplex^n))".into(),
            ceiled: Some(scaled.ceil_i128()?),
            value: Some(scaled),
            strict: false,
            asymptotic: false,
            symbolic: false,
            applicable: true,
        });
        entries.push(BoundEntry {
            id: "phi-growth-limit".into(),
            target: "lim_h phi(h,n)/h^n".into(),
            role: BoundRole::LimitValue,
            formula: "1 / (n! delta_L(simplex^n))".into(),
            value: Some(factor),
            ceiled: None,
            strict: false,
            asymptotic: true,
            symbolic: false,
            applicable: true,
        });
    }

    // General-n simplex density bounds and the growth-rate window they give.
    let coeff = diffbody_coefficient(n)?;
    let density_low = Rat::from_bigints(
        BigInt::from(2) * num_traits::pow::pow(factorial(n), 2),
        factorial(2 * n),
    )?;
    let density_up = Rat::from_bigints(
        bigpow(2, n) * num_traits::pow::pow(factorial(n), 2),
        factorial(2 * n),
    )?;
    entries.push(BoundEntry {
        id: "simplex-packing-density-lower".into(),
        target: format!("delta_L(simplex^{n})"),
        role: BoundRole::LowerBound,
        formula: "2 (n!)^2 / (2n)!".into(),
        value: Some(density_low),
        ceiled: None,
        strict: false,
        asymptotic: false,
        symbolic: false,
        applicable: true,
    });
    entries.push(BoundEntry {
        id: "simplex-packing-density-upper".into(),
        target: format!("delta_L(simplex^{n})"),
        role: BoundRole::UpperBound,
        formula: "2^n (n!)^2 / (2n)!".into(),
        value: Some(density_up),
        ceiled: None,
        strict: true,
        asymptotic: false,
        symbolic: false,
        // At n=1 and n=2 the formula equals the exact density, so the
        // strict form only bites from n=3 on.
        applicable: n >= 3,
    });
    entries.push(BoundEntry {
        id: "simplex-packing-density-asymptotic-lower".into(),
        target: format!("delta_L(simplex^{n})"),
        role: BoundRole::LowerBound,
        formula: "(log 2 + o(1)) n (n!)^2 / (2n)!".into(),
        value: None,
        ceiled: None,
        strict: false,
        asymptotic: true,
        symbolic: true,
        applicable: true,
    });

    let scaled_general = &hn * &coeff;
    entries.push(BoundEntry {
        id: "diffbody-scaled-lower".into(),
        target: "phi(h,n)".into(),
        role: BoundRole::LowerBound,
        formula: "(2n)!/(2^n (n!)^3) * h^n".into(),
        ceiled: Some(scaled_general.ceil_i128()?),
        value: Some(scaled_general),
        strict: true,
        asymptotic: false,
        symbolic: false,
        applicable: true,
    });
    let upper_coeff = Rat::from_bigints(
        factorial(2 * n),
        BigInt::from(2) * num_traits::pow::pow(factorial(n), 3),
    )?;
    entries.push(BoundEntry {
        id: "growth-upper-asymptotic".into(),
        target: "phi(h,n)".into(),
        role: BoundRole::UpperBound,
        formula: "(1+eps) (2n)!/(2 (n!)^3) * h^n, h large".into(),
        value: Some(&hn * &upper_coeff),
        ceiled: None,
        strict: true,
        asymptotic: true,
        symbolic: false,
        applicable: true,
    });
    if n >= 4 {
        entries.push(BoundEntry {
            id: "phi-growth-limit-lower".into(),
            target: "lim_h phi(h,n)/h^n".into(),
            role: BoundRole::LowerBound,
            formula: "(2n)!/(2^n (n!)^3)".into(),
            value: Some(coeff),
            ceiled: None,
            strict: true,
            asymptotic: true,
            symbolic: false,
            applicable: true,
        });
        entries.push(BoundEntry {
            id: "phi-growth-limit-upper".into(),
            target: "lim_h phi(h,n)/h^n".into(),
            role: BoundRole::UpperBound,
            formula: "(2n)!/(2 (n!)^3)".into(),
            value: Some(upper_coeff),
            ceiled: None,
            strict: false,
            asymptotic: true,
            symbolic: false,
            applicable: true,
        });
    }
    entries.push(BoundEntry {
        id: "phi-growth-limit-upper-large-n".into(),
        target: "lim_h phi(h,n)/h^n".into(),
        role: BoundRole::UpperBound,
        formula: "(2n)! / ((log 2 + o(1)) n (n!)^3)".into(),
        value: None,
        ceiled: None,
        strict: false,
        asymptotic: true,
        symbolic: true,
        applicable: true,
    });

    // Covering side.
    if let Some(theta) = simplex_covering_density(n) {
        entries.push(BoundEntry {
            id: "simplex-covering-density".into(),
            target: format!("theta_L(simplex^{n})"),
            role: BoundRole::ExactValue,
            formula: "known exact value, n <= 2".into(),
            value: Some(theta.clone()),
            ceiled: None,
            strict: false,
            asymptotic: false,
            symbolic: false,
            applicable: true,
        });
        let factor = (&Rat::from_bigints(factorial(n), BigInt::one())? * &theta).recip()?;
        entries.push(BoundEntry {
            id: "psi-growth-limit".into(),
            target: "lim_h psi(h,n)/h^n".into(),
            role: BoundRole::LimitValue,
            formula: "1 / (n! theta_L(simplex^n))".into(),
            value: Some(factor),
            ceiled: None,
            strict: false,
            asymptotic: true,
            symbolic: false,
            applicable: true,
        });
    } else {
        let low = &Rat::one() + &Rat::from_bigints(BigInt::one(), bigpow(2, 3 * n + 7))?;
        entries.push(BoundEntry {
            id: "simplex-covering-density-lower".into(),
            target: format!("theta_L(simplex^{n})"),
            role: BoundRole::LowerBound,
            formula: "1 + 2^-(3n+7)".into(),
            value: Some(low),
            ceiled: None,
            strict: false,
            asymptotic: false,
            symbolic: false,
            applicable: true,
        });
        entries.push(BoundEntry {
            id: "simplex-covering-density-upper".into(),
            target: format!("theta_L(simplex^{n})"),
            role: BoundRole::UpperBound,
            formula: "n^(log2 log2 n + c), c an absolute constant".into(),
            value: None,
            ceiled: None,
            strict: false,
            asymptotic: false,
            symbolic: true,
            applicable: true,
        });
    }

    Ok(BoundsTable { h, n, entries })
}
