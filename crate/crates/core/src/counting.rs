//! Exact evaluation of the disjoint-pair counts from a class table.
//!
//! For a fixed reference matrix, `q(n,k)` counts the Π-matrices agreeing with
//! it on at least some fixed set of `k` positions, summed over all such sets;
//! inclusion–exclusion over `k` gives the number `xi` of matrices disjoint from
//! the reference. Everything here is exact big-integer arithmetic.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::classes::{ClassCache, ClassTable, EnumerationLimit};
use crate::error::{Error, Result};
use crate::matrix::perm::factorial;

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| {
        acc * BigUint::from(n - i) / BigUint::from(i + 1)
    })
}

/// `|Sigma_{n^2}| = |Pi_n| = (n!)^{2n}`.
pub fn sigma_count(n: usize) -> BigUint {
    BigUint::from(factorial(n)).pow(2 * n as u32)
}

/// `sum over classes with k edges of orbit_size * weight`.
pub fn q_value(table: &ClassTable, k: usize) -> Result<BigUint> {
    let n2 = table.n * table.n;
    if k > n2 {
        return Err(Error::InvalidTable(format!("k={k} outside 0..={n2}")));
    }
    table.check_complete_for(k)?;
    Ok(table
        .classes_with_k(k)
        .map(|c| BigUint::from(c.orbit_size) * &c.weight)
        .sum())
}

pub fn q_values(table: &ClassTable) -> Result<Vec<BigUint>> {
    (0..=table.n * table.n).map(|k| q_value(table, k)).collect()
}

fn alternating_sum(q: &[BigUint]) -> Result<BigUint> {
    let total = q.iter().enumerate().fold(BigInt::zero(), |acc, (k, v)| {
        let v = BigInt::from(v.clone());
        if k % 2 == 0 {
            acc + v
        } else {
            acc - v
        }
    });
    if total.is_negative() {
        return Err(Error::Inconsistent(format!(
            "alternating sum is negative: {total}"
        )));
    }
    Ok(total.magnitude().clone())
}

/// Number of matrices disjoint from any fixed reference:
/// `sum_{k=0}^{n^2} (-1)^k q(n,k)`, the `k = 0` term being `(n!)^{2n}`.
pub fn xi(table: &ClassTable) -> Result<BigUint> {
    alternating_sum(&q_values(table)?)
}

fn eta_from(sigma: &BigUint, xi: &BigUint) -> Result<BigUint> {
    let product = sigma * xi;
    if product.is_odd() {
        return Err(Error::Inconsistent(format!(
            "(n!)^(2n) * xi = {product} is odd, cannot halve"
        )));
    }
    Ok(product >> 1)
}

/// Number of unordered disjoint pairs, `(n!)^{2n} * xi / 2`.
pub fn eta(table: &ClassTable) -> Result<BigUint> {
    eta_from(&sigma_count(table.n), &xi(table)?)
}

/// Probability that two distinct uniformly chosen matrices are disjoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Probability(pub BigRational);

impl Probability {
    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn decimal(&self, places: usize) -> String {
        render_decimal(&self.0, places)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

fn probability_from(n: usize, xi: &BigUint) -> Result<Probability> {
    if n < 2 {
        return Err(Error::UndefinedForN1);
    }
    let den = BigInt::from(sigma_count(n)) - 1;
    Ok(Probability(BigRational::new(BigInt::from(xi.clone()), den)))
}

/// `xi / ((n!)^{2n} - 1)`, reduced.
pub fn probability(table: &ClassTable) -> Result<Probability> {
    probability_from(table.n, &xi(table)?)
}

/// Fixed-point rendering with round-half-even at `places` digits.
pub fn render_decimal(r: &BigRational, places: usize) -> String {
    let negative = r.is_negative();
    let num = r.numer().magnitude() * BigUint::from(10u32).pow(places as u32);
    let den = r.denom().magnitude();
    let (mut scaled, rem) = num.div_rem(den);
    let twice = rem << 1;
    if twice > *den || (twice == *den && scaled.is_odd()) {
        scaled += 1u32;
    }
    let digits = scaled.to_string();
    let body = if places == 0 {
        digits
    } else {
        let padded = format!("{digits:0>width$}", width = places + 1);
        let (int, frac) = padded.split_at(padded.len() - places);
        format!("{int}.{frac}")
    };
    if negative && body.chars().any(|c| c != '0' && c != '.') {
        format!("-{body}")
    } else {
        body
    }
}

/// Every count for one `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountReport {
    pub n: usize,
    pub sigma_count: BigUint,
    pub q: Vec<BigUint>,
    pub xi: BigUint,
    pub eta: BigUint,
    /// `None` for `n = 1`.
    pub p: Option<Probability>,
}

#[derive(Serialize)]
struct ProbabilityDoc {
    num: String,
    den: String,
    decimal: String,
}

#[derive(Serialize)]
struct ReportDoc {
    n: usize,
    sigma_count: String,
    q: Vec<String>,
    xi: String,
    eta: String,
    p: Option<ProbabilityDoc>,
}

impl CountReport {
    pub const DEFAULT_PLACES: usize = 6;

    pub fn from_table(table: &ClassTable) -> Result<Self> {
        let n = table.n;
        let sigma = sigma_count(n);
        let q = q_values(table)?;
        if q[0] != sigma || q[n * n] != BigUint::one() {
            return Err(Error::Inconsistent(
                "q(n,0) or q(n,n^2) disagrees with its closed form".into(),
            ));
        }
        let xi = alternating_sum(&q)?;
        if xi >= sigma {
            return Err(Error::Inconsistent(format!("xi={xi} not below (n!)^(2n)")));
        }
        let eta = eta_from(&sigma, &xi)?;
        let p = match probability_from(n, &xi) {
            Ok(p) => Some(p),
            Err(Error::UndefinedForN1) => None,
            Err(e) => return Err(e),
        };
        Ok(CountReport {
            n,
            sigma_count: sigma,
            q,
            xi,
            eta,
            p,
        })
    }

    pub fn probability(&self) -> Result<&Probability> {
        self.p.as_ref().ok_or(Error::UndefinedForN1)
    }

    pub fn to_json(&self, places: usize) -> String {
        let doc = ReportDoc {
            n: self.n,
            sigma_count: self.sigma_count.to_string(),
            q: self.q.iter().map(BigUint::to_string).collect(),
            xi: self.xi.to_string(),
            eta: self.eta.to_string(),
            p: self.p.as_ref().map(|p| ProbabilityDoc {
                num: p.numer().to_string(),
                den: p.denom().to_string(),
                decimal: p.decimal(places),
            }),
        };
        serde_json::to_string_pretty(&doc).expect("serializing plain data")
    }

    /// `xi=.. eta=.. p=num/den ≈ decimal`.
    pub fn summary_line(&self, places: usize) -> String {
        let p = match &self.p {
            Some(p) => format!("p={}/{} ≈ {}", p.numer(), p.denom(), p.decimal(places)),
            None => "p=undefined (n=1)".to_string(),
        };
        format!("xi={} eta={} {p}", self.xi, self.eta)
    }
}

/// Enumerates (or loads from `cache`) the class table for `n` and evaluates it.
pub fn full_report(
    n: usize,
    cache: Option<&ClassCache>,
    limit: EnumerationLimit,
    force: bool,
) -> Result<CountReport> {
    let table = match cache {
        Some(cache) => cache.load_or_build(n, limit, force)?,
        None => crate::classes::enumerate_classes(n, limit)?,
    };
    CountReport::from_table(&table)
}
