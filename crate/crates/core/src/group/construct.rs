use std::collections::{HashMap, VecDeque};

use super::{FiniteGroup, GroupError, MAX_ORDER};
use crate::arith;

/// Mixed-radix coordinates for an abelian group `C_{n_0} x C_{n_1} x ...`.
/// Index of a tuple is `c_0 + n_0 (c_1 + n_1 (c_2 + ...))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianCoords {
    moduli: Vec<u32>,
    size: usize,
}

impl AbelianCoords {
    pub fn new(moduli: &[u32]) -> Self {
        let moduli: Vec<u32> = moduli.iter().copied().filter(|&m| m > 1).collect();
        let size = moduli.iter().map(|&m| m as usize).product();
        AbelianCoords { moduli, size }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn moduli(&self) -> &[u32] {
        &self.moduli
    }

    pub fn exponent(&self) -> u64 {
        self.moduli.iter().fold(1, |acc, &m| arith::lcm(acc, m as u64))
    }

    pub fn decode(&self, mut idx: usize) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.moduli.len());
        for &m in &self.moduli {
            out.push((idx % m as usize) as u32);
            idx /= m as usize;
        }
        out
    }

    pub fn encode(&self, coords: &[u32]) -> usize {
        let mut idx = 0usize;
        for (i, &m) in self.moduli.iter().enumerate().rev() {
            idx = idx * m as usize + (coords[i] % m) as usize;
        }
        idx
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (x, y) = (self.decode(a), self.decode(b));
        let s: Vec<u32> = x
            .iter()
            .zip(&y)
            .zip(&self.moduli)
            .map(|((&u, &v), &m)| (u + v) % m)
            .collect();
        self.encode(&s)
    }

    /// `k * a` in additive notation; `k` may be negative.
    pub fn scale(&self, a: usize, k: i64) -> usize {
        let x = self.decode(a);
        let s: Vec<u32> = x
            .iter()
            .zip(&self.moduli)
            .map(|(&u, &m)| ((u as i64 * k).rem_euclid(m as i64)) as u32)
            .collect();
        self.encode(&s)
    }

    pub fn element_order(&self, a: usize) -> u64 {
        self.decode(a)
            .iter()
            .zip(&self.moduli)
            .fold(1, |acc, (&u, &m)| arith::lcm(acc, m as u64 / arith::gcd(u as u64, m as u64)))
    }
}

fn abelian_name(moduli: &[u32]) -> String {
    if moduli.is_empty() {
        return "C1".into();
    }
    moduli.iter().map(|m| format!("C{m}")).collect::<Vec<_>>().join(" x ")
}

impl FiniteGroup {
    pub fn trivial() -> Self {
        FiniteGroup::from_fn(1, "C1", |_, _| 0).expect("trivial group")
    }

    pub fn cyclic(n: u32) -> Result<Self, GroupError> {
        Self::abelian(&[n])
    }

    /// Direct product of cyclic groups of the given orders.
    pub fn abelian(moduli: &[u32]) -> Result<Self, GroupError> {
        if moduli.contains(&0) {
            return Err(GroupError::InvalidParams("cyclic factor of order 0".into()));
        }
        let coords = AbelianCoords::new(moduli);
        if coords.size() > MAX_ORDER {
            return Err(GroupError::ClosureTooLarge);
        }
        let table: Vec<Vec<u32>> = (0..coords.size()).map(|i| coords.decode(i)).collect();
        let m = coords.moduli().to_vec();
        let mut g = FiniteGroup::from_fn(coords.size(), abelian_name(&m), |a, b| {
            let s: Vec<u32> = table[a]
                .iter()
                .zip(&table[b])
                .zip(&m)
                .map(|((&u, &v), &q)| (u + v) % q)
                .collect();
            coords.encode(&s)
        })?;
        let mut gens = Vec::new();
        let mut stride = 1usize;
        for &q in &m {
            gens.push(stride);
            stride *= q as usize;
        }
        g.set_generator_hint(gens);
        g.add_tag("abelian");
        Ok(g)
    }

    /// Group generated by permutations of `{0, .., n-1}` (images as vectors).
    /// Products compose left to right: `(ab)(x) = b(a(x))`.
    pub fn from_permutations(gens: &[Vec<usize>]) -> Result<Self, GroupError> {
        if gens.is_empty() {
            return Err(GroupError::InvalidParams("no generators".into()));
        }
        let deg = gens.iter().map(|g| g.len()).max().unwrap_or(0);
        let pad = |p: &Vec<usize>| -> Result<Vec<u16>, GroupError> {
            let mut v: Vec<u16> = (0..deg as u16).collect();
            for (i, &x) in p.iter().enumerate() {
                if x >= deg {
                    return Err(GroupError::InvalidParams(format!("point {x} out of range")));
                }
                v[i] = x as u16;
            }
            let mut seen = vec![false; deg];
            for &x in &v {
                if seen[x as usize] {
                    return Err(GroupError::InvalidParams("not a permutation".into()));
                }
                seen[x as usize] = true;
            }
            Ok(v)
        };
        let gens: Vec<Vec<u16>> = gens.iter().map(pad).collect::<Result<_, _>>()?;
        let compose = |a: &[u16], b: &[u16]| -> Vec<u16> { a.iter().map(|&x| b[x as usize]).collect() };
        let identity: Vec<u16> = (0..deg as u16).collect();
        let mut elems = vec![identity.clone()];
        let mut index: HashMap<Vec<u16>, usize> = HashMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for s in &gens {
                let p = compose(&elems[i], s);
                if !index.contains_key(&p) {
                    if elems.len() >= MAX_ORDER {
                        return Err(GroupError::ClosureTooLarge);
                    }
                    index.insert(p.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(p);
                }
            }
        }
        let n = elems.len();
        let gen_idx: Vec<usize> = gens.iter().map(|s| index[s]).filter(|&i| i != 0).collect();
        let mut g = FiniteGroup::from_fn(n, format!("PermGroup({n})"), |a, b| {
            index[&compose(&elems[a], &elems[b])]
        })?;
        if !gen_idx.is_empty() {
            g.set_generator_hint(gen_idx);
        }
        Ok(g)
    }

    /// Direct product; the pair `(a, b)` has index `a * |g2| + b`.
    pub fn direct_product(g1: &FiniteGroup, g2: &FiniteGroup) -> Result<Self, GroupError> {
        let (n1, n2) = (g1.order(), g2.order());
        if n1 * n2 > MAX_ORDER {
            return Err(GroupError::ClosureTooLarge);
        }
        let name = if g1.order() == 1 {
            g2.name().to_string()
        } else if g2.order() == 1 {
            g1.name().to_string()
        } else {
            format!("{} x {}", g1.name(), g2.name())
        };
        let mut g = FiniteGroup::from_fn(n1 * n2, name, |x, y| {
            let (a1, b1) = (x / n2, x % n2);
            let (a2, b2) = (y / n2, y % n2);
            g1.mul(a1, a2) * n2 + g2.mul(b1, b2)
        })?;
        let mut gens: Vec<usize> = g1.generators().into_iter().map(|a| a * n2).collect();
        gens.extend(g2.generators());
        g.set_generator_hint(gens);
        for t in g1.tags().iter().filter(|t| t.as_str() == "abelian") {
            if g2.tags().contains(t) {
                g.add_tag("abelian");
            }
        }
        Ok(g)
    }

    /// `(left, right)` embeddings of the factors of [`direct_product`].
    ///
    /// [`direct_product`]: FiniteGroup::direct_product
    pub fn product_embeddings(n1: usize, n2: usize) -> (Vec<usize>, Vec<usize>) {
        ((0..n1).map(|a| a * n2).collect(), (0..n2).collect())
    }

    /// `<a, b | a^{2m} = 1, b^2 = a^m, a^b = a^-1>`, element `a^i b^j` at
    /// index `i + 2m j`.
    pub fn dicyclic(m: u32) -> Result<Self, GroupError> {
        if m < 2 {
            return Err(GroupError::InvalidParams("dicyclic needs m >= 2".into()));
        }
        let n2 = 2 * m as usize;
        if 2 * n2 > MAX_ORDER {
            return Err(GroupError::ClosureTooLarge);
        }
        let mm = m as usize;
        let mut g = FiniteGroup::from_fn(2 * n2, format!("Dic({m})"), |x, y| {
            let (i, j) = (x % n2, x / n2);
            let (k, l) = (y % n2, y / n2);
            let k_eff = if j == 1 { (n2 - k) % n2 } else { k };
            let mut e = (i + k_eff) % n2;
            if j == 1 && l == 1 {
                e = (e + mm) % n2;
            }
            e + n2 * ((j + l) % 2)
        })?;
        g.set_generator_hint(vec![1, n2]);
        g.add_tag("generalized-dicyclic");
        Ok(g)
    }

    pub fn quaternion() -> Self {
        let mut g = Self::dicyclic(2).expect("Q8");
        g.set_name("Q8");
        g
    }

    /// `A <g>` with `g^2 = t` and `a^g = a^-1`; `A` has the given invariants
    /// and `t` is an index in [`AbelianCoords`] numbering. Element `a g^j`
    /// has index `a + |A| j`.
    pub fn generalized_dicyclic(a_invariants: &[u32], t: usize) -> Result<Self, GroupError> {
        let coords = AbelianCoords::new(a_invariants);
        let na = coords.size();
        if 2 * na > MAX_ORDER {
            return Err(GroupError::ClosureTooLarge);
        }
        if t >= na || coords.element_order(t) != 2 {
            return Err(GroupError::NotOrderTwo(t));
        }
        if coords.exponent() <= 2 {
            return Err(GroupError::AbelianResult);
        }
        let inv_name = coords
            .moduli()
            .iter()
            .map(|m| m.to_string())
            .collect::<Vec<_>>()
            .join(",");
        let mut g = FiniteGroup::from_fn(2 * na, format!("GDic({inv_name};{t})"), |x, y| {
            let (a, j) = (x % na, x / na);
            let (b, l) = (y % na, y / na);
            let b_eff = if j == 1 { coords.scale(b, -1) } else { b };
            let mut e = coords.add(a, b_eff);
            if j == 1 && l == 1 {
                e = coords.add(e, t);
            }
            e + na * ((j + l) % 2)
        })?;
        if g.is_abelian() {
            return Err(GroupError::AbelianResult);
        }
        let mut gens: Vec<usize> = {
            let mut stride = 1usize;
            coords
                .moduli()
                .iter()
                .map(|&m| {
                    let s = stride;
                    stride *= m as usize;
                    s
                })
                .collect()
        };
        gens.push(na);
        g.set_generator_hint(gens);
        g.add_tag("generalized-dicyclic");
        Ok(g)
    }

    pub fn dihedral(n: u32) -> Result<Self, GroupError> {
        if n == 0 || 2 * n as usize > MAX_ORDER {
            return Err(GroupError::InvalidParams("dihedral order out of range".into()));
        }
        let nn = n as usize;
        let mut g = FiniteGroup::from_fn(2 * nn, format!("D{n}"), |x, y| {
            let (i, j) = (x % nn, x / nn);
            let (k, l) = (y % nn, y / nn);
            let k_eff = if j == 1 { (nn - k) % nn } else { k };
            (i + k_eff) % nn + nn * ((j + l) % 2)
        })?;
        g.set_generator_hint(if nn > 1 { vec![1, nn] } else { vec![nn] });
        Ok(g)
    }

    pub fn symmetric(n: usize) -> Result<Self, GroupError> {
        if n <= 1 {
            return Ok(Self::trivial());
        }
        let mut swap: Vec<usize> = (0..n).collect();
        swap.swap(0, 1);
        let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let mut g = Self::from_permutations(&[swap, cycle])?;
        g.set_name(format!("S{n}"));
        Ok(g)
    }

    pub fn alternating(n: usize) -> Result<Self, GroupError> {
        if n <= 2 {
            return Ok(Self::trivial());
        }
        let gens: Vec<Vec<usize>> = (2..n)
            .map(|i| {
                let mut p: Vec<usize> = (0..n).collect();
                p[0] = 1;
                p[1] = i;
                p[i] = 0;
                p
            })
            .collect();
        let mut g = Self::from_permutations(&gens)?;
        g.set_name(format!("A{n}"));
        Ok(g)
    }

    /// `(P ⋉ Q) x B` with `P = <g> x P0`, `x^g = x^k` on `Q` and `P0`, `B`
    /// acting trivially. Returns the group and the index of `g`.
    pub fn pq_family(params: &PqFamilyParams) -> Result<(Self, usize), GroupError> {
        params.validate()?;
        let p = params.p as u64;
        let ng = p.pow(params.c + params.d) as usize;
        let p0 = AbelianCoords::new(&params.p0_invariants);
        let q = AbelianCoords::new(&params.q_invariants);
        let b = AbelianCoords::new(&params.b_invariants);
        let total = ng * p0.size() * q.size() * b.size();
        if total > MAX_ORDER {
            return Err(GroupError::ClosureTooLarge);
        }
        let exp_q = q.exponent();
        let kpow: Vec<i64> = (0..ng as u64)
            .map(|i| arith::pow_mod(params.k, i, exp_q) as i64)
            .collect();
        let (np0, nq) = (p0.size(), q.size());
        let split = |x: usize| {
            let i = x % ng;
            let r = x / ng;
            let a = r % np0;
            let r = r / np0;
            (i, a, r % nq, r / nq)
        };
        let join = |i: usize, a: usize, y: usize, c: usize| i + ng * (a + np0 * (y + nq * c));
        let mut g = FiniteGroup::from_fn(total, params.name(), |x, y| {
            let (i1, a1, y1, c1) = split(x);
            let (i2, a2, y2, c2) = split(y);
            join(
                (i1 + i2) % ng,
                p0.add(a1, a2),
                q.add(q.scale(y1, kpow[i2]), y2),
                b.add(c1, c2),
            )
        })?;
        let mut gens = vec![1usize];
        let mut push_factor = |coords: &AbelianCoords, f: &dyn Fn(usize) -> usize| {
            let mut stride = 1usize;
            for &m in coords.moduli() {
                gens.push(f(stride));
                stride *= m as usize;
            }
        };
        push_factor(&p0, &|s| join(0, s, 0, 0));
        push_factor(&q, &|s| join(0, 0, s, 0));
        push_factor(&b, &|s| join(0, 0, 0, s));
        g.set_generator_hint(gens);
        g.add_tag("pq-family");
        Ok((g, 1))
    }
}

/// Parameters of the split metabelian family `(P ⋉ Q) x B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PqFamilyParams {
    pub p: u32,
    pub q: u32,
    pub c: u32,
    pub d: u32,
    pub k: u64,
    pub p0_invariants: Vec<u32>,
    pub q_invariants: Vec<u32>,
    pub b_invariants: Vec<u32>,
}

impl PqFamilyParams {
    /// `Q = C_q`, trivial `P0` and `B`, and the smallest admissible `k`.
    pub fn new(p: u32, q: u32, c: u32, d: u32) -> Result<Self, GroupError> {
        let k = Self::default_k(p, q, c, &[q])?;
        Ok(PqFamilyParams {
            p,
            q,
            c,
            d,
            k,
            p0_invariants: Vec::new(),
            q_invariants: vec![q],
            b_invariants: Vec::new(),
        })
    }

    /// Smallest `k > 1` whose multiplicative order modulo `exp(Q)` is `p^c`.
    pub fn default_k(p: u32, q: u32, c: u32, q_invariants: &[u32]) -> Result<u64, GroupError> {
        if !arith::is_prime(p as u64) || !arith::is_prime(q as u64) || p == q {
            return Err(GroupError::InvalidParams("p and q must be distinct primes".into()));
        }
        let exp_q = q_invariants.iter().fold(1u64, |a, &m| arith::lcm(a, m as u64));
        let target = (p as u64).pow(c);
        (2..exp_q.max(2))
            .find(|&k| arith::mult_order(k, exp_q) == Some(target))
            .ok_or_else(|| {
                GroupError::InvalidParams(format!("no k of order {target} modulo {exp_q}"))
            })
    }

    pub fn name(&self) -> String {
        let mut s = format!("PQ({},{},{},{}", self.p, self.q, self.c, self.d);
        let default = Self::default_k(self.p, self.q, self.c, &self.q_invariants).ok();
        if default != Some(self.k) {
            s.push_str(&format!(",{}", self.k));
        }
        s.push(')');
        if self.q_invariants != [self.q] {
            s.push_str(&format!(" Q={}", abelian_name(&self.q_invariants)));
        }
        if !self.p0_invariants.is_empty() {
            s.push_str(&format!(" P0={}", abelian_name(&self.p0_invariants)));
        }
        if !self.b_invariants.is_empty() {
            s.push_str(&format!(" B={}", abelian_name(&self.b_invariants)));
        }
        s
    }

    pub fn validate(&self) -> Result<(), GroupError> {
        let bad = |m: &str| Err(GroupError::InvalidParams(m.to_string()));
        let (p, q) = (self.p as u64, self.q as u64);
        if !arith::is_prime(p) || !arith::is_prime(q) || p == q {
            return bad("p and q must be distinct primes");
        }
        if self.c == 0 || self.d == 0 {
            return bad("c and d must be positive");
        }
        let pc = p.pow(self.c);
        let pd = p.pow(self.d);
        if (q - 1) % pc != 0 {
            return bad("p^c must divide q-1");
        }
        if self.q_invariants.is_empty()
            || self.q_invariants.iter().any(|&m| m < 2 || !arith::is_prime_power_of(m as u64, q))
        {
            return bad("Q invariants must be nontrivial powers of q");
        }
        let exp_q = self.q_invariants.iter().fold(1u64, |a, &m| arith::lcm(a, m as u64));
        if arith::mult_order(self.k, exp_q) != Some(pc) {
            return bad("multiplicative order of k modulo exp(Q) must equal p^c");
        }
        if pd % arith::p_part(q - 1, p) != 0 {
            return bad("(q-1)_p must divide p^d");
        }
        if self
            .p0_invariants
            .iter()
            .any(|&m| m < 2 || !arith::is_prime_power_of(m as u64, p) || m as u64 > pd)
        {
            return bad("P0 invariants must be powers of p not exceeding p^d");
        }
        if self
            .b_invariants
            .iter()
            .any(|&m| m < 2 || m as u64 % p == 0 || m as u64 % q == 0)
        {
            return bad("B invariants must be coprime to p and q");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coords_roundtrip() {
        let c = AbelianCoords::new(&[2, 1, 6]);
        assert_eq!(c.size(), 12);
        assert_eq!(c.exponent(), 6);
        for x in 0..12 {
            assert_eq!(c.encode(&c.decode(x)), x);
            assert_eq!(c.add(x, c.scale(x, -1)), 0);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(FiniteGroup::dicyclic(1), Err(GroupError::InvalidParams(_))));
        assert!(matches!(
            FiniteGroup::generalized_dicyclic(&[2, 2], 1),
            Err(GroupError::AbelianResult)
        ));
        assert!(matches!(
            FiniteGroup::generalized_dicyclic(&[4], 1),
            Err(GroupError::NotOrderTwo(1))
        ));
        assert!(PqFamilyParams::new(2, 7, 2, 2).is_err());
        assert!(PqFamilyParams::new(3, 5, 1, 1).is_err());
        assert!(matches!(FiniteGroup::symmetric(6), Err(GroupError::ClosureTooLarge)));
    }

    #[test]
    fn named_groups_satisfy_axioms() {
        let groups = [
            FiniteGroup::symmetric(4).unwrap(),
            FiniteGroup::dihedral(5).unwrap(),
            FiniteGroup::generalized_dicyclic(&[4, 2], 2).unwrap(),
            FiniteGroup::abelian(&[3, 4]).unwrap(),
            FiniteGroup::pq_family(&PqFamilyParams::new(2, 5, 2, 2).unwrap()).unwrap().0,
        ];
        let orders = [24, 10, 16, 12, 80];
        for (g, n) in groups.iter().zip(orders) {
            assert_eq!(g.order(), n, "{}", g.name());
            g.verify_axioms().unwrap();
            let back = FiniteGroup::from_descriptor(&g.descriptor()).unwrap();
            assert_eq!(back.token(), g.token());
        }
    }
}
