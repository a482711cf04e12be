//! Finite groups given by explicit Cayley tables.
//!
//! Elements are numbered `0..order` with the identity at index 0. The
//! numbering is fixed by the constructor, so every derived report is
//! reproducible.

mod construct;
mod structure;

use std::collections::hash_map::DefaultHasher;
use std::collections::VecDeque;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;

pub use construct::{AbelianCoords, PqFamilyParams};
pub use structure::{QuaternionProduct, StructuralReport};

/// Largest group order handled anywhere in the crate.
pub const MAX_ORDER: usize = 512;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("generated group exceeds {MAX_ORDER} elements")]
    ClosureTooLarge,
    #[error("element {0} does not have order 2")]
    NotOrderTwo(usize),
    #[error("construction yields an abelian group")]
    AbelianResult,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("invalid Cayley table: {0}")]
    InvalidTable(String),
}

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<u16>,
    inv: Vec<u16>,
    elem_order: Vec<u32>,
    exponent: u32,
    generator_hint: Option<Vec<usize>>,
    name: String,
    tags: Vec<String>,
    token: u64,
}

/// A subgroup stored as a sorted element set of its parent group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    parent: u64,
    elements: Vec<usize>,
}

impl Subgroup {
    pub fn parent(&self) -> u64 {
        self.parent
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &x in &self.elements {
            m[x] = true;
        }
        m
    }
}

/// JSON descriptor used for catalog persistence.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GroupDescriptor {
    pub name: String,
    pub order: usize,
    pub cayley_row_major: Vec<u16>,
    pub tags: Vec<String>,
}

impl FiniteGroup {
    /// Builds a group from a multiplication closure on `0..order`. The
    /// closure must describe an associative operation with identity 0;
    /// callers that cannot guarantee this go through [`from_cayley_table`].
    ///
    /// [`from_cayley_table`]: FiniteGroup::from_cayley_table
    pub(crate) fn from_fn(
        order: usize,
        name: impl Into<String>,
        f: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, GroupError> {
        if order == 0 {
            return Err(GroupError::InvalidTable("empty group".into()));
        }
        if order > MAX_ORDER {
            return Err(GroupError::ClosureTooLarge);
        }
        let mut mul = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                mul.push(f(a, b) as u16);
            }
        }
        Self::from_raw(order, mul, name.into(), Vec::new())
    }

    fn from_raw(
        order: usize,
        mul: Vec<u16>,
        name: String,
        tags: Vec<String>,
    ) -> Result<Self, GroupError> {
        for a in 0..order {
            if mul[a] as usize != a || mul[a * order] as usize != a {
                return Err(GroupError::InvalidTable(
                    "index 0 is not the identity".into(),
                ));
            }
        }
        let mut inv = vec![u16::MAX; order];
        for a in 0..order {
            for b in 0..order {
                if mul[a * order + b] == 0 {
                    if inv[a] != u16::MAX {
                        return Err(GroupError::InvalidTable(format!(
                            "element {a} has two inverses"
                        )));
                    }
                    inv[a] = b as u16;
                }
            }
            if inv[a] == u16::MAX {
                return Err(GroupError::InvalidTable(format!(
                    "element {a} has no inverse"
                )));
            }
        }
        let mut elem_order = vec![0u32; order];
        let mut exponent = 1u64;
        for a in 0..order {
            let mut x = a;
            let mut k = 1u32;
            while x != 0 {
                x = mul[x * order + a] as usize;
                k += 1;
                if k as usize > order {
                    return Err(GroupError::InvalidTable(format!(
                        "element {a} has no finite order"
                    )));
                }
            }
            elem_order[a] = k;
            exponent = arith::lcm(exponent, k as u64);
        }
        let mut hasher = DefaultHasher::new();
        order.hash(&mut hasher);
        mul.hash(&mut hasher);
        let token = hasher.finish();
        Ok(FiniteGroup {
            order,
            mul,
            inv,
            elem_order,
            exponent: exponent as u32,
            generator_hint: None,
            name,
            tags,
            token,
        })
    }

    /// Builds a group from an untrusted table and checks the group axioms
    /// exhaustively.
    pub fn from_cayley_table(
        name: impl Into<String>,
        order: usize,
        table: Vec<u16>,
    ) -> Result<Self, GroupError> {
        if order == 0 || order > MAX_ORDER {
            return Err(GroupError::InvalidTable(format!("order {order} out of range")));
        }
        if table.len() != order * order {
            return Err(GroupError::InvalidTable("table has wrong length".into()));
        }
        if table.iter().any(|&x| x as usize >= order) {
            return Err(GroupError::InvalidTable("entry out of range".into()));
        }
        let g = Self::from_raw(order, table, name.into(), Vec::new())?;
        g.verify_axioms()?;
        Ok(g)
    }

    pub fn from_descriptor(d: &GroupDescriptor) -> Result<Self, GroupError> {
        let mut g = Self::from_cayley_table(d.name.clone(), d.order, d.cayley_row_major.clone())?;
        g.tags = d.tags.clone();
        Ok(g)
    }

    pub fn descriptor(&self) -> GroupDescriptor {
        GroupDescriptor {
            name: self.name.clone(),
            order: self.order,
            cayley_row_major: self.mul.clone(),
            tags: self.tags.clone(),
        }
    }

    /// Exhaustive check of associativity, identity and inverses.
    pub fn verify_axioms(&self) -> Result<(), GroupError> {
        let n = self.order;
        for a in 0..n {
            if self.mul(a, 0) != a || self.mul(0, a) != a {
                return Err(GroupError::InvalidTable("identity law fails".into()));
            }
            if self.mul(a, self.inv(a)) != 0 || self.mul(self.inv(a), a) != 0 {
                return Err(GroupError::InvalidTable(format!("inverse law fails at {a}")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                let row_ab = &self.mul[ab * n..ab * n + n];
                for c in 0..n {
                    if row_ab[c] as usize != self.mul(a, self.mul(b, c)) {
                        return Err(GroupError::InvalidTable(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn elem_order(&self, a: usize) -> u32 {
        self.elem_order[a]
    }

    pub fn elem_orders(&self) -> &[u32] {
        &self.elem_order
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn tags(&self) -> &[String] {
        &self.tags
    }

    pub fn add_tag(&mut self, tag: impl Into<String>) {
        let tag = tag.into();
        if !self.tags.contains(&tag) {
            self.tags.push(tag);
        }
    }

    /// Identity token shared by every [`Subgroup`] of this group.
    pub fn token(&self) -> u64 {
        self.token
    }

    pub fn generator_hint(&self) -> Option<&[usize]> {
        self.generator_hint.as_deref()
    }

    pub(crate) fn set_generator_hint(&mut self, gens: Vec<usize>) {
        self.generator_hint = Some(gens);
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let o = self.elem_order[a] as i64;
        let k = k.rem_euclid(o);
        let mut x = 0;
        for _ in 0..k {
            x = self.mul(x, a);
        }
        x
    }

    /// `a^g = g^-1 a g`.
    pub fn conj(&self, a: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), a), g)
    }

    /// `[a, b] = a^-1 b^-1 a b`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    /// Generators: the constructor's hint, or a greedy generating set.
    pub fn generators(&self) -> Vec<usize> {
        if let Some(h) = &self.generator_hint {
            return h.clone();
        }
        let mut gens = Vec::new();
        let mut member = self.trivial_subgroup().mask(self.order);
        for x in 1..self.order {
            if !member[x] {
                gens.push(x);
                member = self.closure(&gens).mask(self.order);
            }
        }
        gens
    }

    pub fn closure(&self, elts: &[usize]) -> Subgroup {
        let mut member = vec![false; self.order];
        member[0] = true;
        let mut elems = vec![0usize];
        let gens: Vec<usize> = elts.iter().copied().filter(|&x| x != 0).collect();
        let mut queue: VecDeque<usize> = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let z = self.mul(x, g);
                if !member[z] {
                    member[z] = true;
                    elems.push(z);
                    queue.push_back(z);
                }
            }
        }
        self.subgroup_unchecked(elems)
    }

    pub(crate) fn subgroup_unchecked(&self, mut elems: Vec<usize>) -> Subgroup {
        elems.sort_unstable();
        elems.dedup();
        Subgroup {
            parent: self.token,
            elements: elems,
        }
    }

    /// Validates that `elts` is closed under multiplication and inverses.
    pub fn subgroup(&self, elts: &[usize]) -> Result<Subgroup, GroupError> {
        let mut mask = vec![false; self.order];
        for &x in elts {
            if x >= self.order {
                return Err(GroupError::NotASubgroup(format!("{x} is not an element")));
            }
            mask[x] = true;
        }
        if !mask[0] {
            return Err(GroupError::NotASubgroup("identity missing".into()));
        }
        for &a in elts {
            if !mask[self.inv(a)] {
                return Err(GroupError::NotASubgroup(format!("inverse of {a} missing")));
            }
            for &b in elts {
                if !mask[self.mul(a, b)] {
                    return Err(GroupError::NotASubgroup(format!(
                        "product of {a} and {b} missing"
                    )));
                }
            }
        }
        Ok(self.subgroup_unchecked(elts.to_vec()))
    }

    pub(crate) fn check_parent(&self, h: &Subgroup) -> Result<(), GroupError> {
        if h.parent != self.token {
            return Err(GroupError::NotASubgroup(
                "subgroup belongs to a different group".into(),
            ));
        }
        Ok(())
    }

    pub fn whole(&self) -> Subgroup {
        self.subgroup_unchecked((0..self.order).collect())
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        self.subgroup_unchecked(vec![0])
    }

    pub fn cyclic_subgroup(&self, x: usize) -> Subgroup {
        let mut elems = vec![0usize];
        let mut y = x;
        while y != 0 {
            elems.push(y);
            y = self.mul(y, x);
        }
        self.subgroup_unchecked(elems)
    }

    /// Re-indexes `h` as a standalone group. Returns the group and the map
    /// from its element indices to indices of `self`.
    pub fn subgroup_as_group(&self, h: &Subgroup) -> (FiniteGroup, Vec<usize>) {
        let emb = h.elements.clone();
        let m = emb.len();
        let mut pos = vec![usize::MAX; self.order];
        for (i, &x) in emb.iter().enumerate() {
            pos[x] = i;
        }
        let mut mul = Vec::with_capacity(m * m);
        for &a in &emb {
            for &b in &emb {
                mul.push(pos[self.mul(a, b)] as u16);
            }
        }
        let g = Self::from_raw(m, mul, format!("subgroup of {}", self.name), Vec::new())
            .expect("subgroup of a valid group is a valid group");
        (g, emb)
    }
}
