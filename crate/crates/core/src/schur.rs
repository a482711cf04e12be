//! Schur indices and skew-linearity verdicts.
//!
//! Over `Q` and `Q_q` the verdict combines exact local values (real place
//! from the indicator, `ℓ/k` on split metabelian shapes, the quaternion
//! tensor rule) with upper bounds (local divisibility and restriction to
//! cyclic subgroups). Anything the rules cannot settle is `Unknown`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::arith;
use crate::chartab::{CharacterTable, ChartabError, SubgroupTable};
use crate::group::{FiniteGroup, Subgroup};

#[derive(Debug, Error, Clone)]
pub enum SchurError {
    #[error("conductor {0} is even")]
    EvenConductor(u64),
    #[error("l/k = {l}/{k} is not a valid local index")]
    NonIntegralIndex { l: u64, k: u64 },
    #[error("unknown field tag {0:?}")]
    BadField(String),
    #[error(transparent)]
    Table(#[from] ChartabError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Complex,
    Real,
    Rational,
    Local(u64),
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Complex => write!(f, "C"),
            Field::Real => write!(f, "R"),
            Field::Rational => write!(f, "Q"),
            Field::Local(q) => write!(f, "Q_{q}"),
        }
    }
}

impl FromStr for Field {
    type Err = SchurError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "C" => Ok(Field::Complex),
            "R" => Ok(Field::Real),
            "Q" => Ok(Field::Rational),
            _ => s
                .strip_prefix("Q_")
                .and_then(|q| q.parse::<u64>().ok())
                .filter(|&q| arith::is_prime(q))
                .map(Field::Local)
                .ok_or_else(|| SchurError::BadField(s.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

/// A Schur index that is either known or bracketed by `lower | m | upper`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Index {
    Known(u64),
    Unknown { lower: u64, upper: u64 },
}

impl Index {
    fn from_bounds(lower: u64, upper: u64) -> Self {
        if lower == upper {
            Index::Known(lower)
        } else {
            Index::Unknown { lower, upper }
        }
    }

    pub fn known(self) -> Option<u64> {
        match self {
            Index::Known(m) => Some(m),
            Index::Unknown { .. } => None,
        }
    }

    pub fn upper(self) -> u64 {
        match self {
            Index::Known(m) => m,
            Index::Unknown { upper, .. } => upper,
        }
    }

    pub fn lower(self) -> u64 {
        match self {
            Index::Known(m) => m,
            Index::Unknown { lower, .. } => lower,
        }
    }

    fn to_json(self) -> Value {
        match self {
            Index::Known(m) => json!(m),
            Index::Unknown { lower, upper } => json!({ "unknown": { "lower": lower, "upper": upper } }),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SchurVerdict {
    pub char_id: usize,
    pub degree: u32,
    pub m_real: u8,
    /// Local indices at the primes dividing `|G|`; all others are 1.
    pub m_local: BTreeMap<u64, Index>,
    pub m_rational: Index,
    pub skew_linear: BTreeMap<Field, Verdict>,
    pub trace: Vec<String>,
}

impl SchurVerdict {
    pub fn verdict(&self, field: Field) -> Verdict {
        if let Some(v) = self.skew_linear.get(&field) {
            return *v;
        }
        // primes not dividing |G| have trivial local index
        if self.degree == 1 {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }

    pub fn m_local(&self, q: u64) -> Index {
        self.m_local.get(&q).copied().unwrap_or(Index::Known(1))
    }

    pub fn to_json(&self) -> Value {
        let local: serde_json::Map<String, Value> = self
            .m_local
            .iter()
            .map(|(q, m)| (q.to_string(), m.to_json()))
            .collect();
        let verdicts: serde_json::Map<String, Value> = self
            .skew_linear
            .iter()
            .map(|(f, v)| (f.to_string(), json!(v)))
            .collect();
        json!({
            "char_id": self.char_id,
            "degree": self.degree,
            "m_real": self.m_real,
            "m_local": local,
            "m_rational": self.m_rational.to_json(),
            "verdicts": verdicts,
            "trace": self.trace,
        })
    }
}

/// Normal form `G = (P ⋉ Q) x B` with `P = <g> x P0` abelian, `Q` the unique
/// Sylow subgroup of the abelian normal `p`-complement not centralized by
/// `P`, `C = C_P(Q) = <g^{p^c}> x P0` and `x^g = x^k` on `Q`.
#[derive(Clone, Debug)]
pub struct BlackburnShape {
    pub p: u64,
    pub q: u64,
    pub g: usize,
    pub c: u32,
    pub d: u32,
    pub p0: Subgroup,
    pub q_sub: Subgroup,
    pub b: Subgroup,
    pub c_sub: Subgroup,
    pub k: u64,
}

fn log_p(n: u64, p: u64) -> Option<u32> {
    let mut e = 0;
    let mut m = n;
    while m > 1 {
        if m % p != 0 {
            return None;
        }
        m /= p;
        e += 1;
    }
    Some(e)
}

fn commutes_with_all(g: &FiniteGroup, x: usize, gens: &[usize]) -> bool {
    gens.iter().all(|&y| g.mul(x, y) == g.mul(y, x))
}

impl BlackburnShape {
    /// Every shape of the group, one per prime `p` where it exists.
    pub fn detect_all(g: &FiniteGroup) -> Vec<BlackburnShape> {
        arith::prime_divisors(g.order() as u64)
            .into_iter()
            .filter_map(|p| Self::detect(g, p))
            .collect()
    }

    pub fn detect(g: &FiniteGroup, p: u64) -> Option<BlackburnShape> {
        if g.is_abelian() {
            return None;
        }
        let a = g.normal_p_complement(p)?;
        let a_gens = g.subgroup_generators(&a);
        if !a_gens.iter().all(|&x| commutes_with_all(g, x, &a_gens)) {
            return None;
        }
        let sp = g.sylow(p);
        let p_gens = g.subgroup_generators(&sp);
        if !p_gens.iter().all(|&x| commutes_with_all(g, x, &p_gens)) {
            return None;
        }
        // Sylow subgroups of A and which of them P fails to centralize.
        let mut moving = Vec::new();
        for r in arith::prime_divisors(a.order() as u64) {
            let elems: Vec<usize> = a
                .elements()
                .iter()
                .copied()
                .filter(|&x| arith::is_prime_power_of(g.elem_order(x) as u64, r))
                .collect();
            let syl = g.closure(&elems);
            if !syl.elements().iter().all(|&x| commutes_with_all(g, x, &p_gens)) {
                moving.push((r, syl));
            }
        }
        if moving.len() != 1 {
            return None;
        }
        let (q, q_sub) = moving.pop().unwrap();
        let b = g.intersect(&a, &g.centralizer(&p_gens));
        if b.order() * q_sub.order() != a.order() || !g.intersect(&b, &q_sub).is_trivial() {
            return None;
        }
        let q_gens = g.subgroup_generators(&q_sub);
        let c_sub = g.intersect(&sp, &g.centralizer(&q_gens));
        let c = log_p((sp.order() / c_sub.order()) as u64, p)?;
        let pc = p.pow(c);
        let c_gens = g.subgroup_generators(&c_sub);
        let c_exp = c_sub.elements().iter().map(|&x| g.elem_order(x)).max().unwrap_or(1);
        let gen = sp.elements().iter().copied().find(|&x| {
            let mut gens = c_gens.clone();
            gens.push(x);
            g.closure(&gens).order() == sp.order() && g.elem_order(g.pow(x, pc as i64)) == c_exp
        })?;
        let y = g.pow(gen, pc as i64);
        let d = log_p(g.elem_order(y) as u64, p)?;
        let y_sub = g.cyclic_subgroup(y);
        let mut p0_gens = Vec::new();
        let mut p0 = g.trivial_subgroup();
        for &x in c_sub.elements() {
            if p0.contains(x) {
                continue;
            }
            p0_gens.push(x);
            let next = g.closure(&p0_gens);
            if g.intersect(&next, &y_sub).is_trivial() {
                p0 = next;
            } else {
                p0_gens.pop();
            }
        }
        if p0.order() * y_sub.order() != c_sub.order() {
            return None;
        }
        let exp_q = q_sub.elements().iter().map(|&x| g.elem_order(x)).max().unwrap_or(1) as u64;
        let k = (1..exp_q.max(2)).find(|&k| {
            q_gens.iter().all(|&x| g.conj(x, gen) == g.pow(x, k as i64))
        })?;
        if arith::mult_order(k, exp_q) != Some(pc) {
            return None;
        }
        Some(BlackburnShape { p, q, g: gen, c, d, p0, q_sub, b, c_sub, k })
    }
}

/// `ℓ/k` with `ℓ = ord_{theta_order}(q)` and `k = ord_{mu_order}(q)`.
pub fn m_q_blackburn(
    shape: &BlackburnShape,
    mu_order: u64,
    theta_order: u64,
    q: u64,
) -> Result<u64, SchurError> {
    let l = arith::mult_order(q, theta_order).unwrap_or(0);
    let k = arith::mult_order(q, mu_order).unwrap_or(0);
    if k == 0 || l == 0 || l % k != 0 {
        return Err(SchurError::NonIntegralIndex { l, k });
    }
    let m = l / k;
    let pc = shape.p.pow(shape.c);
    if pc % m != 0 {
        return Err(SchurError::NonIntegralIndex { l, k });
    }
    Ok(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuaternionVariant {
    RationalCyclotomic,
    TwoAdic,
    Real,
    Sqrt2Extension,
}

/// Whether `(-1,-1)` over `Q(ζ_n)` (or the named completion/extension) is a
/// matrix algebra.
pub fn quaternion_splits_over(n: u64, variant: QuaternionVariant) -> Result<bool, SchurError> {
    if n % 2 == 0 {
        return Err(SchurError::EvenConductor(n));
    }
    Ok(match variant {
        QuaternionVariant::RationalCyclotomic | QuaternionVariant::TwoAdic => {
            arith::mult_order(2, n).unwrap_or(1) % 2 == 0
        }
        QuaternionVariant::Real => false,
        QuaternionVariant::Sqrt2Extension => n > 1,
    })
}

struct QuaternionSplit {
    z: usize,
    h: Subgroup,
    h_table: Arc<SubgroupTable>,
    h_verdicts: Vec<SchurVerdict>,
}

/// Per-group context for verdicts; shape detection runs once.
pub struct SchurAnalysis<'a> {
    table: &'a CharacterTable,
    shapes: Vec<BlackburnShape>,
    quaternion: Option<QuaternionSplit>,
    cyclic_reps: Vec<usize>,
    /// Proper nontrivial normal `q`-complements.
    complements: BTreeMap<u64, Subgroup>,
}

fn decomposition_group(e: u64, q: u64) -> Vec<u64> {
    let e_prime = e / arith::p_part(e, q);
    let qpow: Vec<u64> = {
        let o = arith::mult_order(q % e_prime.max(1), e_prime).unwrap_or(1);
        (0..o).map(|i| arith::pow_mod(q, i, e_prime)).collect()
    };
    arith::units(e)
        .into_iter()
        .filter(|k| qpow.contains(&(k % e_prime)))
        .collect()
}

/// Number of places above `q` of the field fixed by `stab` inside `Q(ζ_e)`.
fn places_above(e: u64, q: u64, stab: &[u64]) -> usize {
    let mut image: Vec<u64> = decomposition_group(e, q)
        .iter()
        .flat_map(|&a| stab.iter().map(move |&b| a * b % e))
        .collect();
    image.sort_unstable();
    image.dedup();
    arith::euler_phi(e) as usize / image.len()
}

/// Hasse invariants sum to zero and agree in order over one rational prime.
/// When every index is at most 2 and exactly one is undecided, the count of
/// places with invariant 1/2 must be even, which settles it if the undecided
/// prime has an odd number of places.
fn reciprocity(
    m_local: &BTreeMap<u64, Index>,
    real_places: usize,
    places: impl Fn(u64) -> usize,
) -> Option<(u64, u64)> {
    let mut open = m_local.iter().filter(|(_, i)| i.known().is_none());
    let (&q0, idx) = open.next()?;
    if open.next().is_some() || idx.upper() != 2 || idx.lower() != 1 {
        return None;
    }
    let mut halves = real_places;
    for (&q, i) in m_local {
        match i.known() {
            Some(1) => {}
            Some(2) => halves += places(q),
            Some(_) => return None,
            None if q == q0 => {}
            None => return None,
        }
    }
    (places(q0) % 2 == 1).then_some((q0, if halves % 2 == 0 { 1 } else { 2 }))
}

impl<'a> SchurAnalysis<'a> {
    pub fn new(table: &'a CharacterTable) -> Result<Self, SchurError> {
        let g = table.group();
        let shapes = BlackburnShape::detect_all(g);
        let quaternion = match g.split_quaternion_factor() {
            Some((s, h)) => {
                let z = s
                    .elements()
                    .iter()
                    .copied()
                    .find(|&x| g.elem_order(x) == 4)
                    .map(|x| g.mul(x, x))
                    .expect("Q8 factor has elements of order 4");
                let h_table = table.subgroup_table(&h)?;
                let inner = SchurAnalysis::new(&h_table.table)?;
                let h_verdicts = inner.all()?;
                Some(QuaternionSplit { z, h, h_table, h_verdicts })
            }
            None => None,
        };
        let cyclic_reps = table.class_data().reps.clone();
        let complements = arith::prime_divisors(g.order() as u64)
            .into_iter()
            .filter_map(|q| g.normal_p_complement(q).filter(|n| !n.is_trivial()).map(|n| (q, n)))
            .collect();
        Ok(SchurAnalysis { table, shapes, quaternion, cyclic_reps, complements })
    }

    pub fn shapes(&self) -> &[BlackburnShape] {
        &self.shapes
    }

    pub fn table(&self) -> &CharacterTable {
        self.table
    }

    pub fn all(&self) -> Result<Vec<SchurVerdict>, SchurError> {
        (0..self.table.irreducibles().len()).map(|i| self.verdict(i)).collect()
    }

    pub fn m_real(&self, id: usize) -> Result<u8, SchurError> {
        Ok(if self.table.fs_indicator(id)? == -1 { 2 } else { 1 })
    }

    /// gcd over cyclic subgroups `H` and constituents `θ` of
    /// `<χ_H, θ> [K(χ,θ) : K(χ)]`, with `K` the fixed field of `galois`.
    fn restriction_bound(&self, id: usize, stab: &[u64], galois: &[u64]) -> u64 {
        let e = self.table.exponent() as u64;
        let chi = self.table.character(id);
        let s: Vec<u64> = stab.iter().copied().filter(|k| galois.contains(k)).collect();
        let mut bound = chi.degree as u64;
        for &h in &self.cyclic_reps {
            let cls = self.table.class_data().class_of[h];
            for &(j, a) in &chi.mults[cls] {
                let ord = e / arith::gcd(j as u64, e);
                let fixed = s.iter().filter(|&&k| k % ord == 1 % ord).count() as u64;
                bound = arith::gcd(bound, a as u64 * (s.len() as u64 / fixed));
                if bound == 1 {
                    return 1;
                }
            }
        }
        bound
    }

    fn blackburn_local(&self, id: usize, trace: &mut Vec<String>) -> Vec<(u64, u64)> {
        let g = self.table.group();
        let cd = self.table.class_data();
        let chi = self.table.character(id);
        let e = self.table.exponent() as u64;
        let mut out = Vec::new();
        // μ(z) = χ(z)/χ(1) on central z, as an element order.
        let mu_ord = |z: usize| -> Option<u64> {
            match chi.mults[cd.class_of[z]].as_slice() {
                [(j, _)] => Some(e / arith::gcd(*j as u64, e)),
                _ => None,
            }
        };
        for sh in &self.shapes {
            if chi.degree as u64 != sh.p.pow(sh.c) || chi.degree == 1 {
                continue;
            }
            let cb = g.join(&sh.c_sub, &sh.b);
            let p0b = g.join(&sh.p0, &sh.b);
            let Some(mu_order) = cb.elements().iter().map(|&z| mu_ord(z)).try_fold(1, |acc, o| o.map(|o| arith::lcm(acc, o))) else {
                continue;
            };
            let y = g.pow(sh.g, sh.p.pow(sh.c) as i64);
            let Some(mu_y) = mu_ord(y) else { continue };
            let omega = if mu_y > 1 { mu_y * sh.p.pow(sh.c) } else { 1 };
            let Some(rest) = p0b.elements().iter().map(|&z| mu_ord(z)).try_fold(1, |acc, o| o.map(|o| arith::lcm(acc, o))) else {
                continue;
            };
            let theta_order = arith::lcm(omega, rest);
            match m_q_blackburn(sh, mu_order, theta_order, sh.q) {
                Ok(m) => {
                    trace.push(format!("blackburn-lk(p={},q={})", sh.p, sh.q));
                    out.push((sh.q, m));
                }
                Err(_) => trace.push(format!("blackburn-lk-nonintegral(p={},q={})", sh.p, sh.q)),
            }
        }
        out
    }

    /// Quaternion tensor rule for `G = (Q8 x C2^r) x H`, `|H|` odd.
    /// Returns the rational verdict and exact local values it implies.
    fn quaternion_rule(
        &self,
        id: usize,
        trace: &mut Vec<String>,
    ) -> Result<Option<(Verdict, Vec<(u64, u64)>)>, SchurError> {
        let Some(qs) = &self.quaternion else { return Ok(None) };
        let chi = self.table.character(id);
        let cons = self.table.constituents(id, &qs.h)?;
        let [(psi, _)] = cons.as_slice() else { return Ok(None) };
        let psi_v = &qs.h_verdicts[*psi];
        let zc = self.table.class_data().class_of[qs.z];
        if chi.is_degree_at(zc) {
            trace.push("quaternion-tensor-linear".into());
            let locals = psi_v.m_local.iter().filter_map(|(&q, m)| m.known().map(|m| (q, m))).collect();
            return Ok(Some((psi_v.verdict(Field::Rational), locals)));
        }
        let n = qs.h_table.table.character_order_data(*psi);
        let n = n / arith::p_part(n, 2);
        let splits = quaternion_splits_over(n, QuaternionVariant::RationalCyclotomic)?;
        let psi_q = psi_v.verdict(Field::Rational);
        let field_index = arith::euler_phi(n) / qs.h_table.table.character_field_degree(*psi);
        let verdict = if psi_q == Verdict::No {
            Verdict::No
        } else if psi_q == Verdict::Yes && !splits {
            Verdict::Yes
        } else if splits && field_index % 2 == 1 {
            Verdict::No
        } else {
            Verdict::Unknown
        };
        trace.push(format!("quaternion-tensor(n={n},splits={splits})"));
        let mut locals = Vec::new();
        if psi_q == Verdict::Yes && qs.h_table.table.character(*psi).is_linear() {
            locals.push((2, if splits { 1 } else { 2 }));
            for q in arith::prime_divisors(self.table.group().order() as u64) {
                if q != 2 {
                    locals.push((q, 1));
                }
            }
        }
        Ok(Some((verdict, locals)))
    }

    pub fn verdict(&self, id: usize) -> Result<SchurVerdict, SchurError> {
        let chi = self.table.character(id);
        let d = chi.degree as u64;
        let n = self.table.group().order() as u64;
        let e = self.table.exponent() as u64;
        let fs = self.table.fs_indicator(id)?;
        let m_real: u8 = if fs == -1 { 2 } else { 1 };
        let mut trace = Vec::new();
        let mut skew = BTreeMap::new();
        let primes = arith::prime_divisors(n);
        if d == 1 {
            trace.push("linear".into());
            skew.insert(Field::Complex, Verdict::Yes);
            skew.insert(Field::Real, Verdict::Yes);
            skew.insert(Field::Rational, Verdict::Yes);
            let mut m_local = BTreeMap::new();
            for &q in &primes {
                skew.insert(Field::Local(q), Verdict::Yes);
                m_local.insert(q, Index::Known(1));
            }
            return Ok(SchurVerdict {
                char_id: id,
                degree: 1,
                m_real,
                m_local,
                m_rational: Index::Known(1),
                skew_linear: skew,
                trace,
            });
        }
        skew.insert(Field::Complex, Verdict::No);
        let real_yes = d == 2 && fs == -1;
        skew.insert(Field::Real, if real_yes { Verdict::Yes } else { Verdict::No });
        trace.push(format!("fs={fs}"));

        let stab = self.table.stabilizer(id);
        let all_units = arith::units(e);
        let mut exact: BTreeMap<u64, u64> = BTreeMap::new();
        for (q, m) in self.blackburn_local(id, &mut trace) {
            exact.insert(q, m);
        }
        let quat = self.quaternion_rule(id, &mut trace)?;
        if let Some((_, locals)) = &quat {
            for &(q, m) in locals {
                exact.entry(q).or_insert(m);
            }
        }
        let mut m_local = BTreeMap::new();
        for &q in &primes {
            let local_div = if q == 2 { 2 } else { q - 1 };
            let rb = self.restriction_bound(id, &stab, &decomposition_group(e, q));
            let mut up = arith::gcd(arith::gcd(local_div, d), rb);
            // with a normal q-complement N, χ° = e·φ where χ_N = e·(orbit sum)
            if let Some(nq) = self.complements.get(&q) {
                let e = self.table.constituents(id, nq)?.first().map_or(d, |&(_, m)| m as u64);
                if arith::gcd(up, e) < up {
                    trace.push(format!("brauer-complement(q={q},e={e})"));
                }
                up = arith::gcd(up, e);
            }
            let idx = match exact.get(&q) {
                Some(&m) if up % m == 0 => Index::Known(m),
                Some(&m) => {
                    trace.push(format!("conflict(q={q},m={m},bound={up})"));
                    Index::Unknown { lower: 1, upper: up }
                }
                None => Index::from_bounds(1, up),
            };
            if up == 1 && !exact.contains_key(&q) {
                trace.push(format!("local-bound(q={q})"));
            }
            m_local.insert(q, idx);
        }
        let real_places = if fs == -1 { all_units.len() / stab.len() } else { 0 };
        if let Some((q, m)) = reciprocity(&m_local, real_places, |q| places_above(e, q, &stab)) {
            trace.push(format!("reciprocity(q={q})"));
            m_local.insert(q, Index::Known(m));
        }
        let mut lower = m_real as u64;
        let mut upper_lcm = m_real as u64;
        for (&q, &idx) in &m_local {
            lower = arith::lcm(lower, idx.lower());
            upper_lcm = arith::lcm(upper_lcm, idx.upper());
            skew.insert(
                Field::Local(q),
                match idx {
                    Index::Known(m) if m == d => Verdict::Yes,
                    _ if idx.upper() < d => Verdict::No,
                    _ => Verdict::Unknown,
                },
            );
        }
        let global_rb = self.restriction_bound(id, &stab, &all_units);
        let upper = arith::gcd(arith::gcd(upper_lcm, global_rb), d);
        if global_rb < d {
            trace.push("restriction-bound".into());
        }
        let m_rational = Index::from_bounds(lower.min(upper), upper);
        let mut rational = if lower == d {
            Verdict::Yes
        } else if upper < d {
            Verdict::No
        } else {
            Verdict::Unknown
        };
        if let Some((qv, _)) = quat {
            if rational == Verdict::Unknown {
                rational = qv;
            } else if qv != Verdict::Unknown && qv != rational {
                trace.push("conflict(quaternion-tensor)".into());
            }
        }
        skew.insert(Field::Rational, rational);
        Ok(SchurVerdict {
            char_id: id,
            degree: d as u32,
            m_real,
            m_local,
            m_rational,
            skew_linear: skew,
            trace,
        })
    }
}

pub fn skew_linear_verdict(table: &CharacterTable, id: usize, field: Field) -> Result<Verdict, SchurError> {
    Ok(SchurAnalysis::new(table)?.verdict(id)?.verdict(field))
}
