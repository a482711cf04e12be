use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::Serialize;

use super::{FiniteGroup, GroupError, Subgroup};
use crate::arith;

#[derive(Clone, Debug, Serialize)]
pub struct StructuralReport {
    pub order: usize,
    pub exponent: u32,
    pub center_order: usize,
    pub derived_order: usize,
    pub is_abelian: bool,
    pub is_dedekind: bool,
    pub order_histogram: BTreeMap<u32, usize>,
    #[serde(skip)]
    pub center: Subgroup,
    #[serde(skip)]
    pub derived: Subgroup,
}

/// Witness for `G = X x <x, y> x E` where `<x, y> ≅ Q8`, `E` is elementary
/// abelian and `X` is either cyclic of order 4 (generated by `u`) or a second
/// quaternion group `<u, v>`.
#[derive(Clone, Debug)]
pub struct QuaternionProduct {
    pub u: usize,
    pub v: Option<usize>,
    pub x: usize,
    pub y: usize,
    pub elementary_rank: u32,
}

impl FiniteGroup {
    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter()
            .all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        let mask = h.mask(self.order());
        self.generators()
            .iter()
            .all(|&g| h.elements().iter().all(|&x| mask[self.conj(x, g)]))
    }

    pub fn intersect(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let elems = a
            .elements()
            .iter()
            .copied()
            .filter(|&x| b.contains(x))
            .collect();
        self.subgroup_unchecked(elems)
    }

    /// Subgroup generated by two subgroups.
    pub fn join(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let mut gens = self.subgroup_generators(a);
        gens.extend(self.subgroup_generators(b));
        self.closure(&gens)
    }

    /// A small generating set of `h`.
    pub fn subgroup_generators(&self, h: &Subgroup) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut member = self.trivial_subgroup().mask(self.order());
        for &x in h.elements() {
            if !member[x] {
                gens.push(x);
                member = self.closure(&gens).mask(self.order());
            }
        }
        gens
    }

    /// All cyclic subgroups, sorted by order then elements.
    pub fn cyclic_subgroups(&self) -> Vec<Subgroup> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for x in 0..self.order() {
            let c = self.cyclic_subgroup(x);
            if seen.insert(c.elements().to_vec()) {
                out.push(c);
            }
        }
        out.sort_by(|a, b| a.order().cmp(&b.order()).then(a.elements().cmp(b.elements())));
        out
    }

    pub fn center(&self) -> Subgroup {
        let gens = self.generators();
        let elems = (0..self.order())
            .filter(|&z| gens.iter().all(|&g| self.mul(z, g) == self.mul(g, z)))
            .collect();
        self.subgroup_unchecked(elems)
    }

    pub fn centralizer(&self, set: &[usize]) -> Subgroup {
        let elems = (0..self.order())
            .filter(|&z| set.iter().all(|&g| self.mul(z, g) == self.mul(g, z)))
            .collect();
        self.subgroup_unchecked(elems)
    }

    pub fn derived_subgroup(&self) -> Subgroup {
        let n = self.order();
        let mut comms = BTreeSet::new();
        for a in 0..n {
            for b in 0..n {
                comms.insert(self.commutator(a, b));
            }
        }
        let c: Vec<usize> = comms.into_iter().collect();
        self.closure(&c)
    }

    /// Every cyclic subgroup normal, hence every subgroup normal.
    pub fn is_dedekind(&self) -> bool {
        self.cyclic_subgroups().iter().all(|c| self.is_normal(c))
    }

    pub fn structural_scan(&self) -> StructuralReport {
        let center = self.center();
        let derived = self.derived_subgroup();
        let mut hist = BTreeMap::new();
        for &o in self.elem_orders() {
            *hist.entry(o).or_insert(0) += 1;
        }
        StructuralReport {
            order: self.order(),
            exponent: self.exponent(),
            center_order: center.order(),
            derived_order: derived.order(),
            is_abelian: derived.is_trivial(),
            is_dedekind: self.is_dedekind(),
            order_histogram: hist,
            center,
            derived,
        }
    }

    /// Intersection of all nonnormal subgroups, or `G` when there are none.
    /// A subgroup whose cyclic subgroups are all normal is itself normal, so
    /// it suffices to intersect the nonnormal cyclic subgroups.
    pub fn r_of_g(&self) -> Subgroup {
        let mut acc: Option<Subgroup> = None;
        for c in self.cyclic_subgroups() {
            if !self.is_normal(&c) {
                acc = Some(match acc {
                    None => c,
                    Some(a) => self.intersect(&a, &c),
                });
            }
        }
        acc.unwrap_or_else(|| self.whole())
    }

    /// True iff `[G, G] ⊆ N`, i.e. `G/N` is abelian for normal `N`.
    pub fn kernel_quotient_is_abelian(&self, n: &Subgroup) -> Result<bool, GroupError> {
        self.check_parent(n)?;
        let gens = self.generators();
        let mask = n.mask(self.order());
        // [G,G] is the normal closure of commutators of generators.
        if !self.is_normal(n) {
            return Err(GroupError::NotASubgroup("subgroup is not normal".into()));
        }
        Ok(gens
            .iter()
            .all(|&a| gens.iter().all(|&b| mask[self.commutator(a, b)])))
    }

    pub fn normal_closure(&self, elts: &[usize]) -> Subgroup {
        let mut gens: BTreeSet<usize> = BTreeSet::new();
        for &x in elts {
            for g in 0..self.order() {
                gens.insert(self.conj(x, g));
            }
        }
        let v: Vec<usize> = gens.into_iter().collect();
        self.closure(&v)
    }

    pub fn conjugacy_class_of(&self, x: usize) -> Vec<usize> {
        let mut s: Vec<usize> = (0..self.order()).map(|g| self.conj(x, g)).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// All normal subgroups, sorted by order then elements.
    pub fn normal_subgroups(&self) -> Vec<Subgroup> {
        let n = self.order();
        let mut done = vec![false; n];
        let mut closures = Vec::new();
        for x in 0..n {
            if done[x] {
                continue;
            }
            for y in self.conjugacy_class_of(x) {
                done[y] = true;
            }
            closures.push(self.normal_closure(&[x]));
        }
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut all = vec![self.trivial_subgroup()];
        seen.insert(vec![0]);
        let mut i = 0;
        while i < all.len() {
            let cur = all[i].clone();
            for c in &closures {
                if c.is_subset_of(&cur) {
                    continue;
                }
                let j = self.join(&cur, c);
                if seen.insert(j.elements().to_vec()) {
                    all.push(j);
                }
            }
            i += 1;
        }
        all.sort_by(|a, b| a.order().cmp(&b.order()).then(a.elements().cmp(b.elements())));
        all
    }

    /// Every subgroup, by repeatedly joining cyclic subgroups.
    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        let cyclic = self.cyclic_subgroups();
        let gens: Vec<usize> = cyclic
            .iter()
            .map(|c| {
                *c.elements()
                    .iter()
                    .find(|&&x| self.elem_order(x) as usize == c.order())
                    .unwrap_or(&0)
            })
            .collect();
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut all: Vec<Subgroup> = Vec::new();
        for c in &cyclic {
            if seen.insert(c.elements().to_vec()) {
                all.push(c.clone());
            }
        }
        let mut i = 0;
        while i < all.len() {
            let cur = all[i].clone();
            let mut cur_gens = self.subgroup_generators(&cur);
            for &g in &gens {
                if cur.contains(g) {
                    continue;
                }
                cur_gens.push(g);
                let j = self.closure(&cur_gens);
                cur_gens.pop();
                if seen.insert(j.elements().to_vec()) {
                    all.push(j);
                }
            }
            i += 1;
        }
        all.sort_by(|a, b| a.order().cmp(&b.order()).then(a.elements().cmp(b.elements())));
        all
    }

    /// One representative per conjugacy class of subgroups.
    pub fn subgroup_class_reps(&self) -> Vec<Subgroup> {
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut out = Vec::new();
        for h in self.all_subgroups() {
            if seen.contains(h.elements()) {
                continue;
            }
            for g in 0..self.order() {
                let mut c: Vec<usize> = h.elements().iter().map(|&x| self.conj(x, g)).collect();
                c.sort_unstable();
                seen.insert(c);
            }
            out.push(h);
        }
        out
    }

    /// A Sylow `p`-subgroup: a maximal `p`-subgroup grown greedily over the
    /// `p`-elements in index order.
    pub fn sylow(&self, p: u64) -> Subgroup {
        let mut h = self.trivial_subgroup();
        let mut gens = Vec::new();
        for x in 1..self.order() {
            let o = self.elem_order(x) as u64;
            if !arith::is_prime_power_of(o, p) || h.contains(x) {
                continue;
            }
            gens.push(x);
            let k = self.closure(&gens);
            if arith::is_prime_power_of(k.order() as u64, p) {
                h = k;
            } else {
                gens.pop();
            }
        }
        h
    }

    /// The normal `p`-complement, when the `p'`-elements form a subgroup of
    /// index `|G|_p`. Returns the whole group when `p` does not divide `|G|`.
    pub fn normal_p_complement(&self, p: u64) -> Option<Subgroup> {
        let n = self.order() as u64;
        if n % p != 0 {
            return Some(self.whole());
        }
        let elems: Vec<usize> = (0..self.order())
            .filter(|&x| self.elem_order(x) as u64 % p != 0)
            .collect();
        if elems.len() as u64 != n / arith::p_part(n, p) {
            return None;
        }
        let mask = {
            let mut m = vec![false; self.order()];
            for &x in &elems {
                m[x] = true;
            }
            m
        };
        let closed = elems
            .iter()
            .all(|&a| elems.iter().all(|&b| mask[self.mul(a, b)]));
        closed.then(|| self.subgroup_unchecked(elems))
    }

    /// Subgroups of index 2, as kernels of the surjections onto `C2`.
    pub fn index_two_subgroups(&self) -> Vec<Subgroup> {
        let n = self.order();
        if n % 2 != 0 {
            return Vec::new();
        }
        let squares: Vec<usize> = (0..n).map(|x| self.mul(x, x)).collect();
        let k = self.normal_closure(&squares);
        // Basis of the elementary abelian quotient G / K.
        let mut basis = Vec::new();
        let mut span = k.clone();
        let mut span_gens = self.subgroup_generators(&k);
        for x in 0..n {
            if !span.contains(x) {
                basis.push(x);
                span_gens.push(x);
                span = self.closure(&span_gens);
            }
        }
        let k_gens = self.subgroup_generators(&k);
        let r = basis.len();
        let mut out = Vec::new();
        for f in 1u32..(1u32 << r) {
            let ones: Vec<usize> = (0..r).filter(|&i| f >> i & 1 == 1).collect();
            let pivot = basis[ones[0]];
            let mut gens = k_gens.clone();
            for i in 0..r {
                if f >> i & 1 == 0 {
                    gens.push(basis[i]);
                } else if basis[i] != pivot {
                    gens.push(self.mul(pivot, basis[i]));
                }
            }
            let h = self.closure(&gens);
            debug_assert_eq!(h.order() * 2, n);
            out.push(h);
        }
        out.sort_by(|a, b| a.elements().cmp(b.elements()));
        out
    }

    /// Witness `(A, g)`: `A` abelian of index 2, `g ∉ A`, `g^2 ≠ 1` and
    /// `a^g = a^-1` on `A`.
    pub fn generalized_dicyclic_witness(&self) -> Option<(Subgroup, usize)> {
        if self.is_abelian() {
            return None;
        }
        for a in self.index_two_subgroups() {
            let a_gens = self.subgroup_generators(&a);
            let abelian = a_gens
                .iter()
                .all(|&x| a_gens.iter().all(|&y| self.mul(x, y) == self.mul(y, x)));
            if !abelian {
                continue;
            }
            let g = (0..self.order()).find(|&x| !a.contains(x)).expect("proper subgroup");
            // Inversion by one coset element implies it for the whole coset,
            // and (ga)^2 = g^2 on that coset.
            let inverts = a_gens.iter().all(|&x| self.conj(x, g) == self.inv(x));
            if inverts && self.mul(g, g) != 0 {
                return Some((a, g));
            }
        }
        None
    }

    pub fn is_generalized_dicyclic(&self) -> Option<(Subgroup, usize)> {
        self.generalized_dicyclic_witness()
    }

    /// Detects `Q8 x (C2)^r`.
    pub fn is_q8_times_elementary(&self) -> bool {
        let n = self.order();
        n >= 8
            && arith::is_prime_power_of(n as u64, 2)
            && self.exponent() == 4
            && !self.is_abelian()
            && self.is_dedekind()
    }

    /// Elements of order 4 generating a quaternion group `<x, y>`, i.e.
    /// `x^2 = y^2` and `x^y = x^-1`.
    fn quaternion_pairs(&self) -> Vec<(usize, usize)> {
        let fours: Vec<usize> = (0..self.order()).filter(|&x| self.elem_order(x) == 4).collect();
        let mut out = Vec::new();
        for &x in &fours {
            for &y in &fours {
                if x < y
                    && self.mul(x, x) == self.mul(y, y)
                    && self.conj(x, y) == self.inv(x)
                {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Extends `base` by central involutions to a direct complement of the
    /// whole group, returning the elementary abelian rank used.
    fn elementary_complement(&self, base: &Subgroup) -> Option<u32> {
        let center = self.center();
        let mut span = base.clone();
        let mut gens = self.subgroup_generators(base);
        let mut rank = 0;
        for &z in center.elements() {
            if span.order() == self.order() {
                break;
            }
            if self.elem_order(z) == 2 && !span.contains(z) {
                gens.push(z);
                let next = self.closure(&gens);
                if next.order() != 2 * span.order() {
                    gens.pop();
                    continue;
                }
                span = next;
                rank += 1;
            }
        }
        (span.order() == self.order()).then_some(rank)
    }

    /// Detects `C4 x Q8 x (C2)^r` and `Q8 x Q8 x (C2)^r`.
    pub fn quaternion_product(&self) -> Option<QuaternionProduct> {
        let n = self.order();
        if n < 32 || !arith::is_prime_power_of(n as u64, 2) || self.exponent() != 4 {
            return None;
        }
        let derived = self.derived_subgroup();
        let pairs = self.quaternion_pairs();
        if derived.order() == 2 {
            let center = self.center();
            for &(x, y) in &pairs {
                let q = self.closure(&[x, y]);
                let q_mask = q.mask(n);
                for &u in center.elements() {
                    if self.elem_order(u) != 4 || q_mask[self.mul(u, u)] {
                        continue;
                    }
                    let base = self.closure(&[u, x, y]);
                    if base.order() != 32 {
                        continue;
                    }
                    if let Some(rank) = self.elementary_complement(&base) {
                        return Some(QuaternionProduct { u, v: None, x, y, elementary_rank: rank });
                    }
                }
            }
        } else if derived.order() == 4 {
            for (i, &(u, v)) in pairs.iter().enumerate() {
                let q1 = self.closure(&[u, v]);
                for &(x, y) in &pairs[i + 1..] {
                    let commute = [x, y]
                        .iter()
                        .all(|&a| [u, v].iter().all(|&b| self.mul(a, b) == self.mul(b, a)));
                    if !commute || q1.contains(self.mul(x, x)) {
                        continue;
                    }
                    let base = self.closure(&[u, v, x, y]);
                    if base.order() != 64 {
                        continue;
                    }
                    if let Some(rank) = self.elementary_complement(&base) {
                        return Some(QuaternionProduct {
                            u,
                            v: Some(v),
                            x,
                            y,
                            elementary_rank: rank,
                        });
                    }
                }
            }
        }
        None
    }

    /// Order-two subgroup `<u^2 x^2>` of a [`QuaternionProduct`].
    pub fn quaternion_product_kernel(&self, w: &QuaternionProduct) -> Subgroup {
        let z = self.mul(self.mul(w.u, w.u), self.mul(w.x, w.x));
        self.cyclic_subgroup(z)
    }

    /// Splits `G = S x H` with `S ≅ Q8 x (C2)^r` the Sylow 2-subgroup and `H`
    /// of odd order. Returns `(S, H)`.
    pub fn split_quaternion_factor(&self) -> Option<(Subgroup, Subgroup)> {
        let s = self.sylow(2);
        if s.order() < 8 || !self.is_normal(&s) {
            return None;
        }
        let (sg, _) = self.subgroup_as_group(&s);
        if !sg.is_q8_times_elementary() {
            return None;
        }
        let h = self.normal_p_complement(2)?;
        let commute = self
            .subgroup_generators(&s)
            .iter()
            .all(|&a| self.subgroup_generators(&h).iter().all(|&b| self.mul(a, b) == self.mul(b, a)));
        commute.then_some((s, h))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::PqFamilyParams;

    #[test]
    fn s3_basics() {
        let g = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
        assert_eq!(g.center().order(), 1);
        assert_eq!(g.derived_subgroup().order(), 3);
        assert_eq!(g.normal_subgroups().len(), 3);
        assert_eq!(g.all_subgroups().len(), 6);
        assert_eq!(g.subgroup_class_reps().len(), 4);
        // intersection of the three order-2 subgroups
        assert!(g.r_of_g().is_trivial());
    }

    #[test]
    fn q8_is_dedekind() {
        let q = FiniteGroup::quaternion();
        assert!(q.is_dedekind());
        assert_eq!(q.r_of_g().order(), 8);
        assert!(q.is_q8_times_elementary());
        let g = FiniteGroup::direct_product(&q, &FiniteGroup::cyclic(7).unwrap()).unwrap();
        assert_eq!(g.exponent(), 28);
        assert!(g.is_dedekind());
        let (s, h) = g.split_quaternion_factor().unwrap();
        assert_eq!((s.order(), h.order()), (8, 7));
    }

    #[test]
    fn dic3_r_of_g() {
        let g = FiniteGroup::dicyclic(3).unwrap();
        let r = g.r_of_g();
        // <a^3> is the unique involution subgroup
        assert_eq!(r.order(), 2);
        assert_eq!(r.elements(), &[0, 3]);
        let (a, x) = g.generalized_dicyclic_witness().unwrap();
        assert_eq!(a.order(), 6);
        assert!(!a.contains(x));
    }

    #[test]
    fn a4_complements() {
        let g = FiniteGroup::alternating(4).unwrap();
        assert!(g.normal_p_complement(2).is_none());
        let v = g.normal_p_complement(3).unwrap();
        assert_eq!(v.order(), 4);
        assert!(g.is_normal(&v));
        assert_eq!(g.sylow(3).order(), 3);
        assert_eq!(g.sylow(2).order(), 4);
        assert!(g.index_two_subgroups().is_empty());
    }

    #[test]
    fn index_two_counts() {
        let g = FiniteGroup::abelian(&[2, 2, 4]).unwrap();
        assert_eq!(g.index_two_subgroups().len(), 7);
        let d = FiniteGroup::dihedral(4).unwrap();
        assert_eq!(d.index_two_subgroups().len(), 3);
        assert!(d.generalized_dicyclic_witness().is_none());
    }

    #[test]
    fn pq_family_orders() {
        let (g, x) = FiniteGroup::pq_family(&PqFamilyParams::new(3, 7, 1, 1).unwrap()).unwrap();
        assert_eq!(g.order(), 63);
        assert_eq!(g.elem_order(x), 9);
        assert_eq!(g.center().order(), 3);
        let (g, _) = FiniteGroup::pq_family(&PqFamilyParams::new(2, 3, 1, 1).unwrap()).unwrap();
        assert_eq!(g.order(), 12);
        assert!(g.generalized_dicyclic_witness().is_some());
        let (g, x) = FiniteGroup::pq_family(&PqFamilyParams::new(2, 5, 1, 2).unwrap()).unwrap();
        assert_eq!(g.order(), 40);
        assert_eq!(g.elem_order(x), 8);
        assert!(g.verify_axioms().is_ok());
        assert!(g.normal_p_complement(2).is_some());
    }

    #[test]
    fn quaternion_products() {
        let q = FiniteGroup::quaternion();
        let c4 = FiniteGroup::cyclic(4).unwrap();
        let g = FiniteGroup::direct_product(&c4, &q).unwrap();
        let w = g.quaternion_product().unwrap();
        assert_eq!(w.elementary_rank, 0);
        assert_eq!(g.quaternion_product_kernel(&w).order(), 2);
        let qq = FiniteGroup::direct_product(&q, &q).unwrap();
        let w = qq.quaternion_product().unwrap();
        assert!(w.v.is_some());
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let g2 = FiniteGroup::direct_product(&g, &c2).unwrap();
        assert_eq!(g2.quaternion_product().unwrap().elementary_rank, 1);
        let q2 = FiniteGroup::direct_product(&q, &c2).unwrap();
        assert!(q2.quaternion_product().is_none());
    }

    #[test]
    fn kernel_quotient() {
        let g = FiniteGroup::symmetric(4).unwrap();
        let a4 = g.derived_subgroup();
        assert_eq!(a4.order(), 12);
        assert!(g.kernel_quotient_is_abelian(&a4).unwrap());
        assert!(!g.kernel_quotient_is_abelian(&g.trivial_subgroup()).unwrap());
        let other = FiniteGroup::cyclic(3).unwrap().whole();
        assert!(g.kernel_quotient_is_abelian(&other).is_err());
    }
}
