//! Exact complex character tables and character-level quantities.

mod dixon;
pub mod modp;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::arith;
use crate::cyclotomic::Cyclotomic;
use crate::group::{FiniteGroup, GroupError, Subgroup};

pub const DEFAULT_SEED: u64 = 0x5EED;

/// Seed for the randomized splitting, from `NKER_SEED` (decimal or `0x` hex).
pub fn seed_from_env() -> u64 {
    std::env::var("NKER_SEED")
        .ok()
        .and_then(|s| parse_seed(&s))
        .unwrap_or(DEFAULT_SEED)
}

pub fn parse_seed(s: &str) -> Option<u64> {
    let s = s.trim();
    match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(h) => u64::from_str_radix(h, 16).ok(),
        None => s.parse().ok(),
    }
}

#[derive(Debug, Error, Clone)]
pub enum ChartabError {
    #[error("no suitable prime below 2^31")]
    PrimeSearchFailed,
    #[error("lift inconsistent: {0}")]
    LiftInconsistent(String),
    #[error("indicator {0} is not in {{-1, 0, 1}}")]
    NotAnIndicator(String),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("orthogonality failed: {0}")]
    OrthogonalityFailed(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Conjugacy classes in canonical order: identity first, then by element
/// order and smallest member.
#[derive(Clone, Debug)]
pub struct ClassData {
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    pub reps: Vec<usize>,
    pub sizes: Vec<usize>,
    /// `power[s][c]` is the class of `g_c^s`, for `0 <= s < exponent`.
    pub power: Vec<Vec<usize>>,
    pub inverse_class: Vec<usize>,
}

impl ClassData {
    pub fn new(g: &FiniteGroup) -> Self {
        let n = g.order();
        let mut seen = vec![false; n];
        let mut classes = Vec::new();
        for x in 0..n {
            if seen[x] {
                continue;
            }
            let cls = g.conjugacy_class_of(x);
            for &y in &cls {
                seen[y] = true;
            }
            classes.push(cls);
        }
        classes.sort_by_key(|c| (g.elem_order(c[0]), c[0]));
        let mut class_of = vec![0; n];
        for (i, c) in classes.iter().enumerate() {
            for &x in c {
                class_of[x] = i;
            }
        }
        let reps: Vec<usize> = classes.iter().map(|c| c[0]).collect();
        let sizes = classes.iter().map(Vec::len).collect();
        let e = g.exponent() as usize;
        let mut power = vec![vec![0; classes.len()]; e];
        for (c, &r) in reps.iter().enumerate() {
            let mut y = 0;
            for row in power.iter_mut() {
                row[c] = class_of[y];
                y = g.mul(y, r);
            }
        }
        let inverse_class = (0..classes.len()).map(|c| class_of[g.inv(reps[c])]).collect();
        ClassData { classes, class_of, reps, sizes, power, inverse_class }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Class permutation `c ↦ class(g_c^k)`.
    pub fn power_map(&self, k: i64) -> Vec<usize> {
        let e = self.power.len() as i64;
        self.power[k.rem_euclid(e) as usize].clone()
    }
}

#[derive(Clone, Debug)]
pub struct Character {
    pub id: usize,
    pub degree: u32,
    /// Eigenvalue multiplicities of a representing matrix at each class, as
    /// `(j, count)` for the eigenvalue `ζ_e^j`.
    pub mults: Vec<Vec<(u32, u32)>>,
    conductor: u32,
}

impl Character {
    pub fn value(&self, class: usize) -> Cyclotomic {
        let m: Vec<(u32, i64)> = self.mults[class].iter().map(|&(j, c)| (j, c as i64)).collect();
        Cyclotomic::from_multiplicities(self.conductor, &m)
    }

    pub fn values(&self) -> Vec<Cyclotomic> {
        (0..self.mults.len()).map(|c| self.value(c)).collect()
    }

    pub fn is_linear(&self) -> bool {
        self.degree == 1
    }

    /// Whether `χ(g_c) = χ(1)`.
    pub fn is_degree_at(&self, class: usize) -> bool {
        self.mults[class] == [(0, self.degree)]
    }
}

pub struct SubgroupTable {
    pub group: FiniteGroup,
    /// Element `i` of `group` is element `embedding[i]` of the parent.
    pub embedding: Vec<usize>,
    pub table: CharacterTable,
}

pub struct CharacterTable {
    group: Arc<FiniteGroup>,
    classes: ClassData,
    irr: Vec<Character>,
    index: HashMap<Vec<Vec<(u32, u32)>>, usize>,
    sub_cache: Mutex<HashMap<Vec<usize>, Arc<SubgroupTable>>>,
}

impl std::fmt::Debug for CharacterTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CharacterTable")
            .field("group", &self.group.name())
            .field("degrees", &self.degrees())
            .finish()
    }
}

/// Integer accumulator over exponents of `ζ_e`.
struct Acc {
    e: u32,
    v: Vec<i64>,
}

impl Acc {
    fn new(e: u32) -> Self {
        Acc { e, v: vec![0; e as usize] }
    }

    fn add(&mut self, j: i64, c: i64) {
        self.v[j.rem_euclid(self.e as i64) as usize] += c;
    }

    fn finish(self, denom: i64) -> Cyclotomic {
        let m: Vec<(u32, i64)> = self
            .v
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, &c)| (j as u32, c))
            .collect();
        let x = Cyclotomic::from_multiplicities(self.e, &m);
        x.scalar_mul(&BigRational::new(BigInt::one(), BigInt::from(denom)))
    }
}

impl CharacterTable {
    pub fn compute(g: &FiniteGroup) -> Result<Self, ChartabError> {
        Self::compute_with_seed(Arc::new(g.clone()), seed_from_env())
    }

    pub fn compute_with_seed(g: Arc<FiniteGroup>, seed: u64) -> Result<Self, ChartabError> {
        let classes = ClassData::new(&g);
        let raw = dixon::compute(&g, &classes, seed)?;
        let e = g.exponent();
        let mut rows: Vec<(u32, Vec<Vec<(u32, u32)>>)> =
            raw.into_iter().map(|r| (r.degree, r.mults)).collect();
        rows.sort();
        let mut index = HashMap::new();
        let irr: Vec<Character> = rows
            .into_iter()
            .enumerate()
            .map(|(id, (degree, mults))| {
                index.insert(mults.clone(), id);
                Character { id, degree, mults, conductor: e }
            })
            .collect();
        Ok(CharacterTable {
            group: g,
            classes,
            irr,
            index,
            sub_cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn class_data(&self) -> &ClassData {
        &self.classes
    }

    pub fn irreducibles(&self) -> &[Character] {
        &self.irr
    }

    pub fn character(&self, id: usize) -> &Character {
        &self.irr[id]
    }

    pub fn exponent(&self) -> u32 {
        self.group.exponent()
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.irr.iter().map(|c| c.degree).collect()
    }

    /// Row id of a class function given by multiplicities, if irreducible.
    pub fn lookup(&self, mults: &[Vec<(u32, u32)>]) -> Option<usize> {
        self.index.get(mults).copied()
    }

    fn order_i64(&self) -> i64 {
        self.group.order() as i64
    }

    /// `(1/|G|) Σ_c |C| a(c) conj(b(c))` for multiplicity rows.
    fn pairing(&self, a: &[Vec<(u32, u32)>], b: &[Vec<(u32, u32)>]) -> Cyclotomic {
        let mut acc = Acc::new(self.exponent());
        for (c, size) in self.classes.sizes.iter().enumerate() {
            for &(i, x) in &a[c] {
                for &(j, y) in &b[c] {
                    acc.add(i as i64 - j as i64, *size as i64 * x as i64 * y as i64);
                }
            }
        }
        acc.finish(self.order_i64())
    }

    pub fn inner_product(&self, a: usize, b: usize) -> Cyclotomic {
        self.pairing(&self.irr[a].mults, &self.irr[b].mults)
    }

    pub fn kernel(&self, id: usize) -> Subgroup {
        let chi = &self.irr[id];
        let elems = (0..self.classes.len())
            .filter(|&c| chi.is_degree_at(c))
            .flat_map(|c| self.classes.classes[c].iter().copied())
            .collect::<Vec<_>>();
        self.group.closure(&elems)
    }

    /// Frobenius–Schur indicator `(1/|G|) Σ χ(g^2)`.
    pub fn fs_indicator(&self, id: usize) -> Result<i8, ChartabError> {
        let chi = &self.irr[id];
        let sq = &self.classes.power[2 % self.classes.power.len()];
        let mut acc = Acc::new(self.exponent());
        for (c, size) in self.classes.sizes.iter().enumerate() {
            for &(j, m) in &chi.mults[sq[c]] {
                acc.add(j as i64, *size as i64 * m as i64);
            }
        }
        let v = acc.finish(self.order_i64());
        let r = v.as_rational().map_err(|_| ChartabError::NotAnIndicator(v.to_string()))?;
        match (r.is_integer(), r.to_integer().to_i8()) {
            (true, Some(x)) if (-1..=1).contains(&x) => Ok(x),
            _ => Err(ChartabError::NotAnIndicator(r.to_string())),
        }
    }

    /// Row of `χ^σ` for `σ: ζ_e ↦ ζ_e^k`; `k` must be a unit mod `e`.
    pub fn galois_conjugate(&self, id: usize, k: u64) -> usize {
        let e = self.exponent() as u64;
        let mults: Vec<Vec<(u32, u32)>> = self.irr[id]
            .mults
            .iter()
            .map(|cls| {
                let mut v: Vec<(u32, u32)> =
                    cls.iter().map(|&(j, m)| ((j as u64 * k % e) as u32, m)).collect();
                v.sort_unstable();
                v
            })
            .collect();
        self.lookup(&mults).expect("Galois conjugate of an irreducible is irreducible")
    }

    pub fn complex_conjugate(&self, id: usize) -> usize {
        let e = self.exponent() as u64;
        self.galois_conjugate(id, e - 1)
    }

    pub fn galois_orbit(&self, id: usize) -> Vec<usize> {
        let mut out: Vec<usize> = arith::units(self.exponent() as u64)
            .into_iter()
            .map(|k| self.galois_conjugate(id, k))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// `{k ∈ (Z/e)^* : χ^{σ_k} = χ}`, the subgroup fixing `Q(χ)`.
    pub fn stabilizer(&self, id: usize) -> Vec<u64> {
        arith::units(self.exponent() as u64)
            .into_iter()
            .filter(|&k| self.galois_conjugate(id, k) == id)
            .collect()
    }

    pub fn character_field_degree(&self, id: usize) -> u64 {
        arith::euler_phi(self.exponent() as u64) / self.stabilizer(id).len() as u64
    }

    /// Conductor of `Q(χ)`: the least `f | e` with `Q(χ) ⊆ Q(ζ_f)`.
    pub fn character_order_data(&self, id: usize) -> u64 {
        let e = self.exponent() as u64;
        let stab = self.stabilizer(id);
        arith::divisors(e)
            .into_iter()
            .find(|&f| {
                arith::units(e)
                    .into_iter()
                    .filter(|k| k % f == 1 % f)
                    .all(|k| stab.contains(&k))
            })
            .unwrap_or(e)
    }

    /// Table of a subgroup, computed once and cached by element set.
    pub fn subgroup_table(&self, h: &Subgroup) -> Result<Arc<SubgroupTable>, ChartabError> {
        self.group.check_parent(h)?;
        if let Some(t) = self.sub_cache.lock().unwrap().get(h.elements()) {
            return Ok(t.clone());
        }
        let (sg, emb) = self.group.subgroup_as_group(h);
        let table = Self::compute_with_seed(Arc::new(sg.clone()), seed_from_env())?;
        let entry = Arc::new(SubgroupTable { group: sg, embedding: emb, table });
        self.sub_cache
            .lock()
            .unwrap()
            .insert(h.elements().to_vec(), entry.clone());
        Ok(entry)
    }

    /// `χ|_H` as multiplicities over `H`'s classes, in `H`'s conductor.
    fn restricted_mults(&self, id: usize, sub: &SubgroupTable) -> Vec<Vec<(u32, u32)>> {
        let scale = self.exponent() / sub.group.exponent();
        sub.table
            .classes
            .reps
            .iter()
            .map(|&r| {
                self.irr[id].mults[self.classes.class_of[sub.embedding[r]]]
                    .iter()
                    .map(|&(j, m)| (j / scale, m))
                    .collect()
            })
            .collect()
    }

    pub fn restrict(&self, id: usize, h: &Subgroup) -> Result<Vec<Cyclotomic>, ChartabError> {
        let sub = self.subgroup_table(h)?;
        let e = sub.group.exponent();
        Ok(self
            .restricted_mults(id, &sub)
            .iter()
            .map(|m| {
                let v: Vec<(u32, i64)> = m.iter().map(|&(j, c)| (j, c as i64)).collect();
                Cyclotomic::from_multiplicities(e, &v)
            })
            .collect())
    }

    /// Irreducible constituents of `χ|_H` as `(row id in H's table, multiplicity)`.
    pub fn constituents(&self, id: usize, h: &Subgroup) -> Result<Vec<(usize, u32)>, ChartabError> {
        let sub = self.subgroup_table(h)?;
        let res = self.restricted_mults(id, &sub);
        let mut out = Vec::new();
        for theta in sub.table.irreducibles() {
            let ip = sub.table.pairing(&res, &theta.mults);
            let q = ip
                .as_rational()
                .ok()
                .filter(|q| q.is_integer())
                .and_then(|q| q.to_integer().to_u32())
                .ok_or_else(|| ChartabError::OrthogonalityFailed(format!("constituent multiplicity {ip}")))?;
            if q > 0 {
                out.push((theta.id, q));
            }
        }
        Ok(out)
    }

    /// `(1/|N|) Σ_{x ∈ N} χ(x)`.
    pub fn en_pairing(&self, id: usize, n: &Subgroup) -> Result<Cyclotomic, ChartabError> {
        self.group.check_parent(n)?;
        if !self.group.is_normal(n) {
            return Err(ChartabError::NotNormal);
        }
        let mut acc = Acc::new(self.exponent());
        for &x in n.elements() {
            for &(j, m) in &self.irr[id].mults[self.classes.class_of[x]] {
                acc.add(j as i64, m as i64);
            }
        }
        Ok(acc.finish(n.order() as i64))
    }

    /// Exact row and column orthogonality plus `Σ χ(1)^2 = |G|`.
    pub fn check_orthogonality(&self) -> Result<(), ChartabError> {
        let n = self.group.order() as u64;
        let sum: u64 = self.irr.iter().map(|c| (c.degree as u64).pow(2)).sum();
        if sum != n || self.irr.len() != self.classes.len() {
            return Err(ChartabError::OrthogonalityFailed(format!("sum of squared degrees {sum}")));
        }
        for a in 0..self.irr.len() {
            for b in a..self.irr.len() {
                let want = if a == b { BigRational::one() } else { BigRational::zero() };
                let ip = self.inner_product(a, b);
                if ip.as_rational().ok() != Some(want) {
                    return Err(ChartabError::OrthogonalityFailed(format!("<{a},{b}> = {ip}")));
                }
            }
        }
        let e = self.exponent();
        for c1 in 0..self.classes.len() {
            for c2 in c1..self.classes.len() {
                let mut acc = Acc::new(e);
                for chi in &self.irr {
                    for &(i, x) in &chi.mults[c1] {
                        for &(j, y) in &chi.mults[c2] {
                            acc.add(i as i64 - j as i64, x as i64 * y as i64);
                        }
                    }
                }
                let v = acc.finish(1);
                let want = if c1 == c2 { (n as usize / self.classes.sizes[c1]) as i64 } else { 0 };
                if v != Cyclotomic::from_int(e, want) {
                    return Err(ChartabError::OrthogonalityFailed(format!("columns {c1},{c2}: {v}")));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let classes: Vec<Value> = (0..self.classes.len())
            .map(|c| {
                json!({
                    "representative": self.classes.reps[c],
                    "size": self.classes.sizes[c],
                    "element_order": self.group.elem_order(self.classes.reps[c]),
                })
            })
            .collect();
        let rows: Vec<Value> = self
            .irr
            .iter()
            .map(|chi| {
                json!({
                    "degree": chi.degree,
                    "values": chi.values().iter().map(Cyclotomic::to_json).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({ "group": self.group.name(), "classes": classes, "rows": rows })
    }
}

pub fn character_table(g: &FiniteGroup) -> Result<CharacterTable, ChartabError> {
    CharacterTable::compute(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(g: &FiniteGroup) -> CharacterTable {
        let t = CharacterTable::compute_with_seed(Arc::new(g.clone()), DEFAULT_SEED).unwrap();
        t.check_orthogonality().unwrap();
        t
    }

    fn faithful_deg2(t: &CharacterTable) -> usize {
        t.irreducibles().iter().find(|c| c.degree == 2).unwrap().id
    }

    #[test]
    fn small_degrees() {
        assert_eq!(table(&FiniteGroup::symmetric(3).unwrap()).degrees(), vec![1, 1, 2]);
        assert_eq!(table(&FiniteGroup::quaternion()).degrees(), vec![1, 1, 1, 1, 2]);
        assert_eq!(table(&FiniteGroup::alternating(5).unwrap()).degrees(), vec![1, 3, 3, 4, 5]);
        let c4 = table(&FiniteGroup::cyclic(4).unwrap());
        assert_eq!(c4.degrees(), vec![1; 4]);
        let gen_class = c4.class_data().class_of[1];
        let vals: Vec<Cyclotomic> = c4.irreducibles().iter().map(|c| c.value(gen_class)).collect();
        for k in 0..4 {
            assert!(vals.contains(&Cyclotomic::root_of_unity(4, k).unwrap()));
        }
    }

    #[test]
    fn quaternion_tau() {
        let q = FiniteGroup::quaternion();
        let t = table(&q);
        let tau = faithful_deg2(&t);
        let cd = t.class_data();
        let minus_one = (1..8).find(|&x| q.elem_order(x) == 2).unwrap();
        assert_eq!(t.character(tau).value(cd.class_of[minus_one]), Cyclotomic::from_int(4, -2));
        for x in (0..8).filter(|&x| q.elem_order(x) == 4) {
            assert!(t.character(tau).value(cd.class_of[x]).is_zero());
        }
        assert!(t.kernel(tau).is_trivial());
        assert_eq!(t.kernel(0).order(), 8);
        assert_eq!(t.fs_indicator(tau).unwrap(), -1);
        assert_eq!(t.galois_orbit(tau), vec![tau]);
        assert_eq!(t.character_field_degree(tau), 1);
        let z = q.cyclic_subgroup(minus_one);
        assert!(t.en_pairing(tau, &z).unwrap().is_zero());
        assert_eq!(t.en_pairing(0, &z).unwrap(), Cyclotomic::from_int(4, 1));
        let i = (0..8).find(|&x| q.elem_order(x) == 4).unwrap();
        let cons = t.constituents(tau, &q.cyclic_subgroup(i)).unwrap();
        assert_eq!(cons.len(), 2);
        assert!(cons.iter().all(|&(_, m)| m == 1));
        assert!(matches!(
            t.en_pairing(tau, &q.cyclic_subgroup(i)),
            Ok(_)
        ));
    }

    #[test]
    fn cyclic_galois() {
        let t = table(&FiniteGroup::cyclic(5).unwrap());
        assert_eq!(t.galois_orbit(1).len(), 4);
        assert_eq!(t.character_field_degree(1), 4);
        assert_eq!(t.character_order_data(1), 5);
        assert_eq!(t.fs_indicator(1).unwrap(), 0);
        let t4 = table(&FiniteGroup::cyclic(4).unwrap());
        let faithful = (0..4).find(|&i| t4.kernel(i).is_trivial()).unwrap();
        assert_eq!(t4.galois_orbit(faithful).len(), 2);
    }

    #[test]
    fn dic3_characters() {
        let g = FiniteGroup::dicyclic(3).unwrap();
        let t = table(&g);
        assert_eq!(t.degrees(), vec![1, 1, 1, 1, 2, 2]);
        let z = g.cyclic_subgroup(3);
        let s3_type: Vec<usize> = t
            .irreducibles()
            .iter()
            .filter(|c| c.degree == 2 && t.kernel(c.id).order() == 2)
            .map(|c| c.id)
            .collect();
        assert_eq!(s3_type.len(), 1);
        assert_eq!(t.kernel(s3_type[0]).elements(), z.elements());
        assert_eq!(t.en_pairing(s3_type[0], &z).unwrap(), Cyclotomic::from_int(12, 2));
        assert_eq!(t.fs_indicator(s3_type[0]).unwrap(), 1);
        let faithful = t.irreducibles().iter().find(|c| c.degree == 2 && t.kernel(c.id).is_trivial()).unwrap().id;
        assert_eq!(t.fs_indicator(faithful).unwrap(), -1);
        let c6 = g.cyclic_subgroup(1);
        assert_eq!(c6.order(), 6);
        let cons = t.constituents(faithful, &c6).unwrap();
        assert_eq!(cons.len(), 2);
        let sub = t.subgroup_table(&c6).unwrap();
        assert_eq!(sub.table.galois_conjugate(cons[0].0, 5), cons[1].0);
    }

    #[test]
    fn d4_indicator() {
        let t = table(&FiniteGroup::dihedral(4).unwrap());
        assert_eq!(t.fs_indicator(faithful_deg2(&t)).unwrap(), 1);
        let v4 = FiniteGroup::abelian(&[2, 2]).unwrap();
        let s = FiniteGroup::symmetric(4).unwrap();
        assert!(t.en_pairing(0, &v4.whole()).is_err());
        assert!(matches!(
            table(&s).en_pairing(1, &s.sylow(2)),
            Err(ChartabError::NotNormal)
        ));
    }

    #[test]
    fn seeds() {
        assert_eq!(parse_seed("0x5EED"), Some(0x5EED));
        assert_eq!(parse_seed("17"), Some(17));
        assert_eq!(parse_seed("zz"), None);
        let g = FiniteGroup::symmetric(4).unwrap();
        let a = CharacterTable::compute_with_seed(Arc::new(g.clone()), 1).unwrap();
        let b = CharacterTable::compute_with_seed(Arc::new(g), 99).unwrap();
        assert_eq!(a.to_json(), b.to_json());
    }
}
