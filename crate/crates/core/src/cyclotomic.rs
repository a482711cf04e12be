//! Exact arithmetic in `Q(ζ_e)`.
//!
//! Values are stored as sparse sums `Σ c_j ζ_e^j` with exponents taken
//! mod `e`. Nothing is reduced until equality or extraction, where the
//! element is rewritten modulo `Φ_e` into its unique form of degree `< φ(e)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use once_cell::sync::Lazy;
use serde_json::{json, Value};
use thiserror::Error;

use crate::arith;

pub const MAX_CONDUCTOR: u32 = 512;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycloError {
    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u32, u32),
    #[error("{k} is not coprime to the conductor {e}")]
    NotCoprime { k: i64, e: u32 },
    #[error("value is not rational")]
    NotRational,
    #[error("conductor {0} outside 1..=512")]
    ConductorOutOfRange(u64),
    #[error("malformed cyclotomic JSON: {0}")]
    BadJson(String),
}

/// Coefficients of `Φ_n`, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    static CACHE: Lazy<Mutex<HashMap<u32, Vec<i64>>>> = Lazy::new(|| Mutex::new(HashMap::new()));
    if let Some(p) = CACHE.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in arith::divisors(n as u64) {
        if d as u32 == n {
            continue;
        }
        num = exact_div(&num, &cyclotomic_polynomial(d as u32));
    }
    CACHE.lock().unwrap().insert(n, num.clone());
    num
}

// Division by a monic polynomial with zero remainder.
fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quo = vec![0i64; rem.len() - dd];
    for i in (0..quo.len()).rev() {
        let c = rem[i + dd];
        quo[i] = c;
        for (j, &b) in den.iter().enumerate() {
            rem[i + j] -= c * b;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quo
}

struct Reduction {
    phi: usize,
    // rows[j] = x^j mod Φ_e, for 0 <= j < e
    rows: Vec<Vec<i64>>,
}

fn reduction(e: u32) -> Arc<Reduction> {
    static CACHE: Lazy<Mutex<HashMap<u32, Arc<Reduction>>>> =
        Lazy::new(|| Mutex::new(HashMap::new()));
    if let Some(r) = CACHE.lock().unwrap().get(&e) {
        return r.clone();
    }
    let poly = cyclotomic_polynomial(e);
    let phi = poly.len() - 1;
    let mut rows = Vec::with_capacity(e as usize);
    let mut cur = vec![0i64; phi];
    if phi > 0 {
        cur[0] = 1;
    }
    for _ in 0..e {
        rows.push(cur.clone());
        // multiply by x, then substitute x^phi = -Σ poly[i] x^i
        let top = cur[phi - 1];
        for i in (1..phi).rev() {
            cur[i] = cur[i - 1];
        }
        cur[0] = 0;
        for i in 0..phi {
            cur[i] -= top * poly[i];
        }
    }
    let r = Arc::new(Reduction { phi, rows });
    CACHE.lock().unwrap().insert(e, r.clone());
    r
}

#[derive(Clone, Debug)]
pub struct Cyclotomic {
    conductor: u32,
    // sorted by exponent, exponents < conductor, no zero coefficients
    terms: Vec<(u32, BigRational)>,
}

fn check_conductor(e: u64) -> Result<u32, CycloError> {
    if e == 0 || e > MAX_CONDUCTOR as u64 {
        return Err(CycloError::ConductorOutOfRange(e));
    }
    Ok(e as u32)
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Cyclotomic {
    pub fn zero(e: u32) -> Self {
        Cyclotomic { conductor: e.max(1), terms: Vec::new() }
    }

    pub fn from_rational(e: u32, q: BigRational) -> Self {
        Self::from_map(e.max(1), [(0u32, q)])
    }

    pub fn from_int(e: u32, n: i64) -> Self {
        Self::from_rational(e, rat(n))
    }

    pub fn root_of_unity(e: u32, k: i64) -> Result<Self, CycloError> {
        let e = check_conductor(e as u64)?;
        let j = k.rem_euclid(e as i64) as u32;
        Ok(Self::from_map(e, [(j, BigRational::one())]))
    }

    /// `Σ counts[i].1 · ζ_e^{counts[i].0}`, the form produced by character
    /// lifting.
    pub fn from_multiplicities(e: u32, counts: &[(u32, i64)]) -> Self {
        Self::from_map(e, counts.iter().map(|&(j, c)| (j, rat(c))))
    }

    fn from_map(e: u32, it: impl IntoIterator<Item = (u32, BigRational)>) -> Self {
        let mut m: BTreeMap<u32, BigRational> = BTreeMap::new();
        for (j, c) in it {
            *m.entry(j % e).or_insert_with(BigRational::zero) += c;
        }
        let terms = m.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Cyclotomic { conductor: e, terms }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Unreduced `(exponent, coefficient)` terms.
    pub fn raw_terms(&self) -> &[(u32, BigRational)] {
        &self.terms
    }

    fn same(&self, other: &Self) -> Result<(), CycloError> {
        if self.conductor != other.conductor {
            return Err(CycloError::ConductorMismatch(self.conductor, other.conductor));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, CycloError> {
        self.same(other)?;
        Ok(Self::from_map(
            self.conductor,
            self.terms.iter().chain(other.terms.iter()).cloned(),
        ))
    }

    pub fn neg(&self) -> Self {
        Cyclotomic {
            conductor: self.conductor,
            terms: self.terms.iter().map(|(j, c)| (*j, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, CycloError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, CycloError> {
        self.same(other)?;
        let e = self.conductor;
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.push(((a + b) % e, x * y));
            }
        }
        Ok(Self::from_map(e, out))
    }

    pub fn scalar_mul(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero(self.conductor);
        }
        Cyclotomic {
            conductor: self.conductor,
            terms: self.terms.iter().map(|(j, c)| (*j, c * q)).collect(),
        }
    }

    /// Complex conjugation, `ζ ↦ ζ^-1`.
    pub fn conj(&self) -> Self {
        let e = self.conductor;
        Self::from_map(e, self.terms.iter().map(|(j, c)| ((e - j) % e, c.clone())))
    }

    /// Re-expresses the value with conductor `f`, a multiple of the current one.
    pub fn lift(&self, f: u32) -> Result<Self, CycloError> {
        let f = check_conductor(f as u64)?;
        if f % self.conductor != 0 {
            return Err(CycloError::ConductorMismatch(self.conductor, f));
        }
        let s = f / self.conductor;
        Ok(Cyclotomic {
            conductor: f,
            terms: self.terms.iter().map(|(j, c)| (j * s, c.clone())).collect(),
        })
    }

    /// Lifts both operands to the lcm of their conductors.
    pub fn common(a: &Self, b: &Self) -> Result<(Self, Self), CycloError> {
        let l = arith::lcm(a.conductor as u64, b.conductor as u64);
        let l = check_conductor(l)?;
        Ok((a.lift(l)?, b.lift(l)?))
    }

    pub fn galois_apply(&self, k: i64) -> Result<Self, CycloError> {
        let e = self.conductor;
        let kk = k.rem_euclid(e as i64) as u64;
        if arith::gcd(kk, e as u64) != 1 {
            return Err(CycloError::NotCoprime { k, e });
        }
        Ok(Self::from_map(
            e,
            self.terms
                .iter()
                .map(|(j, c)| ((*j as u64 * kk % e as u64) as u32, c.clone())),
        ))
    }

    /// Coefficients of the canonical representative of degree `< φ(e)`.
    pub fn reduced(&self) -> Vec<BigRational> {
        let r = reduction(self.conductor);
        let mut out = vec![BigRational::zero(); r.phi];
        for (j, c) in &self.terms {
            for (i, &a) in r.rows[*j as usize].iter().enumerate() {
                if a != 0 {
                    out[i] += c * rat(a);
                }
            }
        }
        out
    }

    /// Same value with terms replaced by the canonical representative.
    pub fn canonical(&self) -> Self {
        Self::from_map(
            self.conductor,
            self.reduced().into_iter().enumerate().map(|(i, c)| (i as u32, c)),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() || self.reduced().iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.reduced().iter().skip(1).all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Result<BigRational, CycloError> {
        let r = self.reduced();
        if r.iter().skip(1).any(|c| !c.is_zero()) {
            return Err(CycloError::NotRational);
        }
        Ok(r.into_iter().next().unwrap_or_else(BigRational::zero))
    }

    /// Smallest divisor `d` of the conductor with the value in `Q(ζ_d)`,
    /// i.e. fixed by every automorphism `ζ_e ↦ ζ_e^k` with `k ≡ 1 mod d`.
    pub fn minimal_conductor(&self) -> u32 {
        let e = self.conductor as u64;
        arith::divisors(e)
            .into_iter()
            .find(|&d| {
                arith::units(e)
                    .into_iter()
                    .filter(|k| k % d == 1 % d)
                    .all(|k| self.galois_apply(k as i64).map(|y| y == *self).unwrap_or(false))
            })
            .unwrap_or(e) as u32
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .reduced()
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| json!([i, int_json(c.numer()), int_json(c.denom())]))
            .collect();
        json!({ "conductor": self.conductor, "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<Self, CycloError> {
        let bad = |m: &str| CycloError::BadJson(m.to_string());
        let e = v["conductor"].as_u64().ok_or_else(|| bad("conductor"))?;
        let e = check_conductor(e)?;
        let terms = v["terms"].as_array().ok_or_else(|| bad("terms"))?;
        let mut out = Vec::new();
        for t in terms {
            let t = t.as_array().filter(|t| t.len() == 3).ok_or_else(|| bad("term"))?;
            let j = t[0].as_u64().ok_or_else(|| bad("exponent"))?;
            let n = json_int(&t[1]).ok_or_else(|| bad("numerator"))?;
            let d = json_int(&t[2]).ok_or_else(|| bad("denominator"))?;
            if d.is_zero() {
                return Err(bad("zero denominator"));
            }
            out.push(((j % e as u64) as u32, BigRational::new(n, d)));
        }
        Ok(Self::from_map(e, out))
    }
}

fn int_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(x) => json!(x),
        None => json!(n.to_string()),
    }
}

fn json_int(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from),
        Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.reduced() == other.reduced();
        }
        match Self::common(self, other) {
            Ok((a, b)) => a.reduced() == b.reduced(),
            Err(_) => false,
        }
    }
}

impl Eq for Cyclotomic {}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.reduced();
        let mut first = true;
        for (i, c) in r.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => write!(f, "z{}^{i}", self.conductor)?,
                (_, false) => write!(f, "{a}*z{}^{i}", self.conductor)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(e: u32, k: i64) -> Cyclotomic {
        Cyclotomic::root_of_unity(e, k).unwrap()
    }

    #[test]
    fn polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        let p105 = cyclotomic_polynomial(105);
        assert_eq!(p105.len() - 1, 48);
        assert!(p105.contains(&-2));
    }

    #[test]
    fn basic_identities() {
        let s = z(3, 1).add(&z(3, 2)).unwrap().add(&Cyclotomic::from_int(3, 1)).unwrap();
        assert!(s.is_zero());
        assert_eq!(z(4, 1).mul(&z(4, 1)).unwrap(), Cyclotomic::from_int(4, -1));
        let r2 = z(8, 1).conj().add(&z(8, 1)).unwrap();
        assert_eq!(r2, z(8, 1).add(&z(8, 7)).unwrap());
        assert_eq!(r2.mul(&r2).unwrap().as_rational().unwrap(), rat(2));
        assert!(matches!(z(3, 1).add(&z(4, 1)), Err(CycloError::ConductorMismatch(3, 4))));
    }

    #[test]
    fn galois() {
        assert_eq!(z(5, 1).galois_apply(2).unwrap(), z(5, 2));
        let r2 = z(8, 1).add(&z(8, 7)).unwrap();
        let img = r2.galois_apply(3).unwrap();
        assert_eq!(img, z(8, 3).add(&z(8, 5)).unwrap());
        assert_eq!(img, r2.neg());
        assert_eq!(Cyclotomic::from_int(12, 5).galois_apply(7).unwrap(), Cyclotomic::from_int(12, 5));
        assert!(matches!(z(8, 1).galois_apply(2), Err(CycloError::NotCoprime { .. })));
    }

    #[test]
    fn rationality() {
        let x = z(3, 1).add(&z(3, 2)).unwrap();
        assert_eq!(x.as_rational().unwrap(), rat(-1));
        assert!(!z(5, 1).is_rational());
        assert!(matches!(z(5, 1).as_rational(), Err(CycloError::NotRational)));
        let y = z(6, 1).scalar_mul(&rat(2)).sub(&z(6, 1).scalar_mul(&rat(2))).unwrap();
        assert_eq!(y.as_rational().unwrap(), rat(0));
    }

    #[test]
    fn lifting_and_minimal_conductor() {
        let a = z(4, 1).lift(12).unwrap();
        assert_eq!(a, z(12, 3));
        assert_eq!(a, z(4, 1));
        assert_eq!(a.minimal_conductor(), 4);
        assert_eq!(Cyclotomic::from_int(9, 3).minimal_conductor(), 1);
        assert!(matches!(z(4, 1).lift(6), Err(CycloError::ConductorMismatch(4, 6))));
    }

    #[test]
    fn json_roundtrip() {
        let x = z(8, 1).add(&z(8, 3).scalar_mul(&BigRational::new(3.into(), 7.into()))).unwrap();
        let v = x.to_json();
        assert_eq!(v["conductor"], 8);
        assert_eq!(Cyclotomic::from_json(&v).unwrap(), x);
    }

    const CONDUCTORS: [u32; 9] = [1, 2, 3, 4, 5, 8, 9, 12, 63];

    fn arb_cyclo() -> impl Strategy<Value = (u32, Vec<(u32, i64, i64)>)> {
        (0usize..CONDUCTORS.len()).prop_flat_map(|i| {
            let e = CONDUCTORS[i];
            (
                Just(e),
                prop::collection::vec((0..e, -5i64..6, 1i64..4), 0..6),
            )
        })
    }

    fn build(e: u32, t: &[(u32, i64, i64)]) -> Cyclotomic {
        Cyclotomic::from_map(
            e,
            t.iter()
                .map(|&(j, n, d)| (j, BigRational::new(n.into(), d.into()))),
        )
    }

    proptest! {
        #[test]
        fn ring_axioms((e, a) in arb_cyclo(), b in prop::collection::vec((0u32..512, -5i64..6, 1i64..4), 0..6),
                       c in prop::collection::vec((0u32..512, -5i64..6, 1i64..4), 0..6)) {
            let x = build(e, &a);
            let y = build(e, &b);
            let w = build(e, &c);
            prop_assert_eq!(x.add(&y).unwrap(), y.add(&x).unwrap());
            prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
            prop_assert_eq!(x.mul(&y).unwrap().mul(&w).unwrap(), x.mul(&y.mul(&w).unwrap()).unwrap());
            prop_assert_eq!(
                x.mul(&y.add(&w).unwrap()).unwrap(),
                x.mul(&y).unwrap().add(&x.mul(&w).unwrap()).unwrap()
            );
            prop_assert!(x.sub(&x).unwrap().is_zero());
        }

        #[test]
        fn galois_is_homomorphism((e, a) in arb_cyclo(), b in prop::collection::vec((0u32..512, -5i64..6, 1i64..4), 0..6), k in 1i64..200) {
            let x = build(e, &a);
            let y = build(e, &b);
            prop_assert_eq!(x.galois_apply(1).unwrap(), x.clone());
            if arith::gcd(k as u64, e as u64) == 1 {
                let s = |v: &Cyclotomic| v.galois_apply(k).unwrap();
                prop_assert_eq!(s(&x.add(&y).unwrap()), s(&x).add(&s(&y)).unwrap());
                prop_assert_eq!(s(&x.mul(&y).unwrap()), s(&x).mul(&s(&y)).unwrap());
            }
        }

        #[test]
        fn unit_modulus(i in 0usize..CONDUCTORS.len(), j in 0u32..512, n in -6i64..7) {
            let e = CONDUCTORS[i];
            let x = z(e, j as i64).scalar_mul(&rat(n));
            let r = x.mul(&x.conj()).unwrap().as_rational().unwrap();
            prop_assert!(!r.is_negative());
            prop_assert_eq!(r, rat(n * n));
        }
    }
}
