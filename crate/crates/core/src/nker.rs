//! Nonideal kernels, computed from per-character verdicts and predicted from
//! group structure, plus the cross-check between the two.

use std::sync::Arc;

use serde_json::{json, Value};
use thiserror::Error;

use crate::arith;
use crate::chartab::{CharacterTable, ChartabError};
use crate::group::{FiniteGroup, Subgroup};
use crate::schur::{BlackburnShape, Field, SchurAnalysis, SchurError, SchurVerdict, Verdict};

#[derive(Debug, Error)]
pub enum NkerError {
    #[error(transparent)]
    Table(#[from] ChartabError),
    #[error(transparent)]
    Schur(#[from] SchurError),
    #[error("mismatch detected for {}", .0.first().map(|r| r.group.as_str()).unwrap_or("?"))]
    MismatchDetected(Box<Vec<KernelReport>>),
}

#[derive(Clone, Debug)]
pub enum Definitional {
    Exact(Subgroup),
    Partial { lower: Subgroup, upper: Subgroup },
}

impl Definitional {
    pub fn exact(&self) -> Option<&Subgroup> {
        match self {
            Definitional::Exact(s) => Some(s),
            Definitional::Partial { .. } => None,
        }
    }

    pub fn lower(&self) -> &Subgroup {
        match self {
            Definitional::Exact(s) => s,
            Definitional::Partial { lower, .. } => lower,
        }
    }

    pub fn upper(&self) -> &Subgroup {
        match self {
            Definitional::Exact(s) => s,
            Definitional::Partial { upper, .. } => upper,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Prediction {
    Exact(Subgroup),
    /// Nontrivial, containing the given subgroup.
    Nontrivial { lower: Subgroup },
}

impl Prediction {
    pub fn lower(&self) -> &Subgroup {
        match self {
            Prediction::Exact(s) => s,
            Prediction::Nontrivial { lower } => lower,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub cases: Vec<String>,
    pub prediction: Prediction,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Match {
    Yes,
    No,
    NotComparable,
}

#[derive(Clone, Debug)]
pub struct KernelReport {
    pub group: String,
    pub field: Field,
    pub definitional: Definitional,
    pub classifier: Option<Classification>,
    pub matches: Match,
    pub unresolved_chars: usize,
    pub notes: Vec<String>,
}

pub fn subgroup_json(h: &Subgroup) -> Value {
    json!({ "order": h.order(), "elements": h.elements() })
}

impl KernelReport {
    pub fn to_json(&self) -> Value {
        let def = match &self.definitional {
            Definitional::Exact(s) => json!({ "exact": subgroup_json(s) }),
            Definitional::Partial { lower, upper } => {
                json!({ "partial": { "lower": subgroup_json(lower), "upper": subgroup_json(upper) } })
            }
        };
        let cls = self.classifier.as_ref().map(|c| {
            let pred = match &c.prediction {
                Prediction::Exact(s) => json!({ "exact": subgroup_json(s) }),
                Prediction::Nontrivial { lower } => json!({ "nontrivial": { "lower": subgroup_json(lower) } }),
            };
            json!({ "cases": c.cases, "predicted": pred })
        });
        let m = match self.matches {
            Match::Yes => json!(true),
            Match::No => json!(false),
            Match::NotComparable => json!("not-comparable"),
        };
        json!({
            "group": self.group,
            "field": self.field.to_string(),
            "definitional": def,
            "classifier": cls,
            "match": m,
            "unresolved_chars": self.unresolved_chars,
            "notes": self.notes,
        })
    }
}

/// Everything needed to evaluate both routes for one group.
pub struct GroupAnalysis {
    pub group: Arc<FiniteGroup>,
    pub table: CharacterTable,
    pub verdicts: Vec<SchurVerdict>,
    pub r_of_g: Subgroup,
    pub shapes: Vec<BlackburnShape>,
}

impl GroupAnalysis {
    pub fn new(g: &FiniteGroup) -> Result<Self, NkerError> {
        let table = CharacterTable::compute(g)?;
        let analysis = SchurAnalysis::new(&table)?;
        let verdicts = analysis.all()?;
        let shapes = analysis.shapes().to_vec();
        drop(analysis);
        Ok(GroupAnalysis {
            group: Arc::new(g.clone()),
            r_of_g: g.r_of_g(),
            table,
            verdicts,
            shapes,
        })
    }

    pub fn unresolved(&self, field: Field) -> usize {
        self.verdicts.iter().filter(|v| v.verdict(field) == Verdict::Unknown).count()
    }

    /// Intersection of kernels of characters that are not skew-linear.
    pub fn nker_definitional(&self, field: Field) -> Definitional {
        let g = &self.group;
        let mut sure = g.whole();
        let mut maybe = g.whole();
        let mut unknown = false;
        for v in &self.verdicts {
            match v.verdict(field) {
                Verdict::Yes => {}
                Verdict::No => {
                    let k = self.table.kernel(v.char_id);
                    sure = g.intersect(&sure, &k);
                    maybe = g.intersect(&maybe, &k);
                }
                Verdict::Unknown => {
                    unknown = true;
                    maybe = g.intersect(&maybe, &self.table.kernel(v.char_id));
                }
            }
        }
        if unknown {
            Definitional::Partial { lower: maybe, upper: sure }
        } else {
            Definitional::Exact(sure)
        }
    }
}

pub fn nker_definitional(a: &GroupAnalysis, field: Field) -> Definitional {
    a.nker_definitional(field)
}

pub fn classify_complex(g: &FiniteGroup) -> Classification {
    if g.is_abelian() {
        Classification { cases: vec!["abelian".into()], prediction: Prediction::Exact(g.whole()) }
    } else {
        Classification { cases: vec!["nonabelian".into()], prediction: Prediction::Exact(g.trivial_subgroup()) }
    }
}

pub fn classify_real(g: &FiniteGroup) -> Classification {
    if g.is_abelian() {
        return Classification { cases: vec!["abelian".into()], prediction: Prediction::Exact(g.whole()) };
    }
    if let Some((_, x)) = g.generalized_dicyclic_witness() {
        let n = g.cyclic_subgroup(g.mul(x, x));
        let abelian_quotient = g.kernel_quotient_is_abelian(&n).unwrap_or(false);
        let pred = if abelian_quotient { g.whole() } else { n };
        return Classification {
            cases: vec!["generalized-dicyclic".into()],
            prediction: Prediction::Exact(pred),
        };
    }
    if let Some(w) = g.quaternion_product() {
        let tag = if w.v.is_some() { "q8xq8" } else { "c4xq8" };
        return Classification {
            cases: vec![tag.into()],
            prediction: Prediction::Exact(g.quaternion_product_kernel(&w)),
        };
    }
    Classification { cases: vec!["none".into()], prediction: Prediction::Exact(g.trivial_subgroup()) }
}

fn odd_order_of_two(n: u64) -> bool {
    arith::mult_order(2, n).unwrap_or(1) % 2 == 1
}

fn abelian_subgroup(g: &FiniteGroup, h: &Subgroup) -> bool {
    let gens = g.subgroup_generators(h);
    gens.iter().all(|&a| gens.iter().all(|&b| g.mul(a, b) == g.mul(b, a)))
}

/// Members of the real classification list that are 2-groups of exponent 4.
fn on_real_list(s: &FiniteGroup) -> bool {
    s.is_abelian() || s.generalized_dicyclic_witness().is_some() || s.quaternion_product().is_some()
}

/// `G = S x A`, `S` a 2-group of exponent 4 on the real list, `A` odd abelian
/// with `ord_{|A|}(2)` odd. Returns `(S, A)`.
pub fn case_b(g: &FiniteGroup) -> Option<(Subgroup, Subgroup)> {
    let s = g.sylow(2);
    if !g.is_normal(&s) {
        return None;
    }
    let a = g.normal_p_complement(2)?;
    let commute = g
        .subgroup_generators(&s)
        .iter()
        .all(|&x| g.subgroup_generators(&a).iter().all(|&y| g.mul(x, y) == g.mul(y, x)));
    if !commute || !abelian_subgroup(g, &a) || !odd_order_of_two(a.order() as u64) {
        return None;
    }
    let (sg, _) = g.subgroup_as_group(&s);
    (sg.exponent() == 4 && on_real_list(&sg)).then_some((s, a))
}

/// Whether a shape satisfies the hypotheses of the split metabelian case,
/// with `P` and `Q` full Sylow subgroups.
fn case_d_shape(g: &FiniteGroup, sh: &BlackburnShape) -> bool {
    let n = g.order() as u64;
    if g.sylow(sh.p as u64).order() as u64 != arith::p_part(n, sh.p)
        || sh.q_sub.order() as u64 != arith::p_part(n, sh.q)
        || sh.d == 0
    {
        return false;
    }
    let qm1_p = arith::p_part(sh.q - 1, sh.p);
    if sh.p.pow(sh.d) % qm1_p != 0 {
        return false;
    }
    let ord_b = arith::mult_order(sh.q, sh.b.order() as u64).unwrap_or(1);
    let ord_pd = arith::mult_order(sh.q, sh.p.pow(sh.d)).unwrap_or(1);
    ord_pd % arith::p_part(ord_b, sh.p) == 0
}

/// `<g^{p^s}>` with `p^s = p^{c-1} (q-1)_p`.
pub fn pq_closed_form_subgroup(g: &FiniteGroup, sh: &BlackburnShape) -> Subgroup {
    let ps = sh.p.pow(sh.c - 1) * arith::p_part(sh.q - 1, sh.p);
    g.cyclic_subgroup(g.pow(sh.g, ps as i64))
}

pub fn sehgal_predicate(g: &FiniteGroup) -> bool {
    if g.is_abelian() {
        return true;
    }
    match g.split_quaternion_factor() {
        Some((_, h)) => abelian_subgroup(g, &h) && odd_order_of_two(h.order() as u64),
        None => false,
    }
}

pub fn division_product_predicate(g: &FiniteGroup, field: Field) -> bool {
    match field {
        Field::Complex => g.is_abelian(),
        Field::Real => g.is_abelian() || g.is_q8_times_elementary(),
        Field::Rational | Field::Local(2) => sehgal_predicate(g),
        Field::Local(_) => g.is_abelian(),
    }
}

pub fn classify_rational(g: &FiniteGroup) -> Classification {
    let mut cases = Vec::new();
    let mut prediction: Option<Prediction> = None;
    let set = |p: Prediction, slot: &mut Option<Prediction>| {
        if slot.is_none() {
            *slot = Some(p);
        }
    };
    // (a)
    if g.is_abelian() {
        cases.push("a".to_string());
        set(Prediction::Exact(g.whole()), &mut prediction);
    }
    // (c): NKer_R <= NKer_Q <= R(G), so the real value is exact when it
    // already equals R(G).
    if g.generalized_dicyclic_witness().is_some() {
        cases.push("c".to_string());
        let real = classify_real(g).prediction.lower().clone();
        let r = g.r_of_g();
        let p = if real.elements() == r.elements() {
            Prediction::Exact(real)
        } else {
            Prediction::Nontrivial { lower: real }
        };
        set(p, &mut prediction);
    }
    // (b)
    if case_b(g).is_some() {
        cases.push("b".to_string());
        let p = if sehgal_predicate(g) {
            Prediction::Exact(g.whole())
        } else {
            let r = g.r_of_g();
            if arith::is_prime(r.order() as u64) {
                Prediction::Exact(r)
            } else {
                Prediction::Nontrivial { lower: g.trivial_subgroup() }
            }
        };
        set(p, &mut prediction);
    }
    // (d)
    let shapes = BlackburnShape::detect_all(g);
    if let Some(sh) = shapes.iter().find(|sh| case_d_shape(g, sh)) {
        cases.push("d".to_string());
        set(Prediction::Exact(pq_closed_form_subgroup(g, sh)), &mut prediction);
    }
    // (e)
    if let Some((_, h)) = g.split_quaternion_factor() {
        let (hg, _) = g.subgroup_as_group(&h);
        let d_like = BlackburnShape::detect_all(&hg).iter().any(|sh| case_d_shape(&hg, sh));
        if d_like && h.order() % 2 == 1 && odd_order_of_two(h.order() as u64) {
            cases.push("e".to_string());
            set(Prediction::Nontrivial { lower: g.trivial_subgroup() }, &mut prediction);
        }
    }
    if cases.is_empty() {
        cases.push("none".to_string());
    }
    Classification {
        cases,
        prediction: prediction.unwrap_or_else(|| Prediction::Exact(g.trivial_subgroup())),
    }
}

pub fn classify(g: &FiniteGroup, field: Field) -> Option<Classification> {
    match field {
        Field::Complex => Some(classify_complex(g)),
        Field::Real => Some(classify_real(g)),
        Field::Rational => Some(classify_rational(g)),
        Field::Local(_) => None,
    }
}

fn compare(def: &Definitional, cls: &Classification) -> Match {
    match (def, &cls.prediction) {
        (Definitional::Exact(d), Prediction::Exact(p)) => {
            if d.elements() == p.elements() {
                Match::Yes
            } else {
                Match::No
            }
        }
        (Definitional::Exact(d), Prediction::Nontrivial { lower }) => {
            if !d.is_trivial() && lower.is_subset_of(d) {
                Match::Yes
            } else {
                Match::No
            }
        }
        (Definitional::Partial { upper, .. }, p) => {
            if p.lower().is_subset_of(upper) {
                Match::NotComparable
            } else {
                Match::No
            }
        }
    }
}

pub fn report(a: &GroupAnalysis, field: Field) -> KernelReport {
    let definitional = a.nker_definitional(field);
    let classifier = classify(&a.group, field);
    let matches = classifier
        .as_ref()
        .map_or(Match::NotComparable, |c| compare(&definitional, c));
    KernelReport {
        group: a.group.name().to_string(),
        field,
        definitional,
        classifier,
        matches,
        unresolved_chars: a.unresolved(field),
        notes: Vec::new(),
    }
}

/// Reports for the requested fields plus the inclusion chain
/// `NKer_C ⊆ NKer_R ⊆ NKer_Q ⊆ R(G)`.
pub fn cross_check_fields(a: &GroupAnalysis, fields: &[Field]) -> Result<Vec<KernelReport>, NkerError> {
    let mut reports: Vec<KernelReport> = fields.iter().map(|&f| report(a, f)).collect();
    let chain = [Field::Complex, Field::Real, Field::Rational];
    let defs: Vec<Definitional> = chain.iter().map(|&f| a.nker_definitional(f)).collect();
    let mut broken = Vec::new();
    for i in 0..2 {
        if !defs[i].lower().is_subset_of(defs[i + 1].upper()) {
            broken.push(format!("NKer_{} not inside NKer_{}", chain[i], chain[i + 1]));
        }
    }
    if !defs[2].lower().is_subset_of(&a.r_of_g) {
        broken.push("NKer_Q not inside R(G)".to_string());
    }
    let mut bad = !broken.is_empty();
    for r in reports.iter_mut() {
        r.notes.extend(broken.iter().cloned());
        bad |= r.matches == Match::No;
    }
    if bad {
        Err(NkerError::MismatchDetected(Box::new(reports)))
    } else {
        Ok(reports)
    }
}

pub fn cross_check(g: &FiniteGroup) -> Result<Vec<KernelReport>, NkerError> {
    let a = GroupAnalysis::new(g)?;
    cross_check_fields(&a, &[Field::Complex, Field::Real, Field::Rational])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::PqFamilyParams;

    fn order_of(d: &Definitional) -> usize {
        d.exact().expect("exact").order()
    }

    #[test]
    fn dic3_all_fields() {
        let g = FiniteGroup::dicyclic(3).unwrap();
        let reports = cross_check(&g).unwrap();
        let orders: Vec<usize> = reports.iter().map(|r| order_of(&r.definitional)).collect();
        assert_eq!(orders, vec![1, 2, 2]);
        assert!(reports.iter().all(|r| r.matches == Match::Yes));
    }

    #[test]
    fn real_examples() {
        let q = FiniteGroup::quaternion();
        let a = GroupAnalysis::new(&q).unwrap();
        assert_eq!(order_of(&a.nker_definitional(Field::Real)), 8);
        let s3 = GroupAnalysis::new(&FiniteGroup::symmetric(3).unwrap()).unwrap();
        assert_eq!(order_of(&s3.nker_definitional(Field::Complex)), 1);
        let c4q8 = FiniteGroup::direct_product(&FiniteGroup::cyclic(4).unwrap(), &q).unwrap();
        assert_eq!(classify_real(&c4q8).prediction.lower().order(), 2);
        assert_eq!(classify_real(&FiniteGroup::symmetric(4).unwrap()).prediction.lower().order(), 1);
        let dic5 = FiniteGroup::dicyclic(5).unwrap();
        assert_eq!(classify_real(&dic5).prediction.lower().order(), 2);
    }

    #[test]
    fn rational_examples() {
        let q = FiniteGroup::quaternion();
        let q8c7 = FiniteGroup::direct_product(&q, &FiniteGroup::cyclic(7).unwrap()).unwrap();
        let c = classify_rational(&q8c7);
        assert!(c.cases.contains(&"b".to_string()));
        assert_eq!(c.prediction.lower().order(), 56);
        let q8c3 = FiniteGroup::direct_product(&q, &FiniteGroup::cyclic(3).unwrap()).unwrap();
        assert_eq!(classify_rational(&q8c3).cases, vec!["none"]);
        let (g63, _) = FiniteGroup::pq_family(&PqFamilyParams::new(3, 7, 1, 1).unwrap()).unwrap();
        let c = classify_rational(&g63);
        assert_eq!(c.cases, vec!["d"]);
        assert_eq!(c.prediction.lower().order(), 3);
        let reports = cross_check(&g63).unwrap();
        assert_eq!(order_of(&reports[1].definitional), 1);
        assert_eq!(order_of(&reports[2].definitional), 3);
        let s4 = cross_check(&FiniteGroup::symmetric(4).unwrap()).unwrap();
        assert!(s4.iter().all(|r| order_of(&r.definitional) == 1));
    }

    #[test]
    fn predicates() {
        let q = FiniteGroup::quaternion();
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let g = FiniteGroup::direct_product(
            &FiniteGroup::direct_product(&q, &c2).unwrap(),
            &FiniteGroup::cyclic(7).unwrap(),
        )
        .unwrap();
        assert!(division_product_predicate(&g, Field::Rational));
        assert!(!division_product_predicate(&q, Field::Local(3)));
        let c6 = FiniteGroup::cyclic(6).unwrap();
        for f in [Field::Complex, Field::Real, Field::Rational, Field::Local(2), Field::Local(3)] {
            assert!(division_product_predicate(&c6, f));
        }
    }
}
