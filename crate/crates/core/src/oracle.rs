//! Brute-force ground truth.
//!
//! Everything here works from definitions only: groups are enumerated label by
//! label and filtered by the sign of the leaf permutation, derived subgroups
//! are subgroup closures of commutators, centers are computed by testing
//! commutation. None of the recursive criteria from
//! [`membership`](crate::membership) is used, so they can be checked against
//! this module.

use std::collections::HashSet;

use num_bigint::BigUint;

use crate::commutator::lift_commutator;
use crate::error::{Error, Result};
use crate::membership::{SubgroupKind, SubgroupSpec, DEFAULT_ENUMERATION_CAP};
use crate::portrait::TreeAutomorphism;
use crate::signature::WreathSignature;

/// Default bound on the size of a set scanned pairwise.
pub const DEFAULT_QUADRATIC_CAP: u64 = 1 << 10;

/// Sign of the leaf permutation: `+1` even, `-1` odd.
pub fn leaf_sign(g: &TreeAutomorphism) -> i8 {
    g.leaf_permutation().sign()
}

/// A deduplicated set of elements of one signature, kept in canonical
/// (lexicographic label) order.
#[derive(Debug, Clone)]
pub struct ElementSet {
    signature: WreathSignature,
    members: Vec<TreeAutomorphism>,
    /// Present once the set has been verified to be a group.
    generators: Option<Vec<TreeAutomorphism>>,
}

impl ElementSet {
    pub fn from_elements(
        signature: &WreathSignature,
        elements: impl IntoIterator<Item = TreeAutomorphism>,
    ) -> Result<Self> {
        let mut members: Vec<_> = elements.into_iter().collect();
        if let Some(bad) = members.iter().find(|g| g.signature() != signature) {
            return Err(Error::SignatureMismatch {
                left: signature.to_string(),
                right: bad.signature().to_string(),
            });
        }
        members.sort_unstable();
        members.dedup();
        Ok(ElementSet {
            signature: signature.clone(),
            members,
            generators: None,
        })
    }

    fn from_closure(closure: Closure) -> Self {
        let mut members = closure.elements;
        members.sort_unstable();
        ElementSet {
            signature: closure.signature,
            members,
            generators: Some(closure.generators),
        }
    }

    pub fn signature(&self) -> &WreathSignature {
        &self.signature
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[TreeAutomorphism] {
        &self.members
    }

    pub fn iter(&self) -> std::slice::Iter<'_, TreeAutomorphism> {
        self.members.iter()
    }

    pub fn contains(&self, g: &TreeAutomorphism) -> bool {
        self.members.binary_search(g).is_ok()
    }

    pub fn is_subset_of(&self, other: &ElementSet) -> bool {
        self.members.iter().all(|g| other.contains(g))
    }

    /// Whether the set has been verified to be closed under products.
    pub fn is_group(&self) -> bool {
        self.generators.is_some()
    }

    /// A generating set, available once the set is known to be a group.
    pub fn generators(&self) -> Option<&[TreeAutomorphism]> {
        self.generators.as_deref()
    }

    /// Checks closure under multiplication by growing the subgroup generated
    /// by greedily chosen members; records the generators on success.
    pub fn verify_group(&mut self) -> bool {
        if self.generators.is_some() {
            return true;
        }
        if self.members.is_empty() {
            return false;
        }
        let mut closure = Closure::new(&self.signature);
        for g in &self.members {
            if closure.elements.len() == self.members.len() {
                break;
            }
            if !closure.add_generator(g.clone()) {
                continue;
            }
            if closure.elements.len() > self.members.len()
                || !closure.elements.iter().all(|h| self.contains(h))
            {
                return false;
            }
        }
        if closure.elements.len() != self.members.len() {
            return false;
        }
        self.generators = Some(closure.generators);
        true
    }

    fn require_group(&self) -> Result<&[TreeAutomorphism]> {
        self.generators
            .as_deref()
            .ok_or_else(|| Error::Unsupported("element set is not a verified group".into()))
    }

    /// Renders every member, one per line.
    pub fn render_lines(&self) -> impl Iterator<Item = String> + '_ {
        self.members.iter().map(TreeAutomorphism::render)
    }
}

impl PartialEq for ElementSet {
    fn eq(&self, other: &Self) -> bool {
        self.signature == other.signature && self.members == other.members
    }
}

impl Eq for ElementSet {}

/// Incremental subgroup closure under right multiplication by generators.
struct Closure {
    signature: WreathSignature,
    elements: Vec<TreeAutomorphism>,
    seen: HashSet<TreeAutomorphism>,
    generators: Vec<TreeAutomorphism>,
}

impl Closure {
    fn new(signature: &WreathSignature) -> Self {
        let e = TreeAutomorphism::identity(signature);
        Closure {
            signature: signature.clone(),
            elements: vec![e.clone()],
            seen: HashSet::from([e]),
            generators: Vec::new(),
        }
    }

    /// Adds `s` unless it already lies in the subgroup. Returns whether the
    /// subgroup grew.
    fn add_generator(&mut self, s: TreeAutomorphism) -> bool {
        if self.seen.contains(&s) {
            return false;
        }
        self.generators.push(s.clone());
        // The old subgroup is closed under the old generators; only cosets
        // reached through `s` are new.
        let old_len = self.elements.len();
        for i in 0..old_len {
            let y = &self.elements[i] * &s;
            if self.seen.insert(y.clone()) {
                self.elements.push(y);
            }
        }
        let mut i = old_len;
        while i < self.elements.len() {
            for j in 0..self.generators.len() {
                let y = &self.elements[i] * &self.generators[j];
                if self.seen.insert(y.clone()) {
                    self.elements.push(y);
                }
            }
            i += 1;
        }
        true
    }
}

/// Brute-force engine with explicit size caps. Exceeding a cap is an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Oracle {
    /// Largest full group that may be enumerated.
    pub enumeration_cap: u64,
    /// Largest set that may be scanned pairwise.
    pub quadratic_cap: u64,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            quadratic_cap: DEFAULT_QUADRATIC_CAP,
        }
    }
}

impl Oracle {
    fn check_enumeration(&self, size: &BigUint) -> Result<()> {
        if *size > BigUint::from(self.enumeration_cap) {
            return Err(Error::CapExceeded {
                size: size.to_string(),
                cap: self.enumeration_cap,
            });
        }
        Ok(())
    }

    fn check_quadratic(&self, size: usize) -> Result<()> {
        if size as u64 > self.quadratic_cap {
            return Err(Error::CapExceeded {
                size: size.to_string(),
                cap: self.quadratic_cap,
            });
        }
        Ok(())
    }

    /// All elements of the group described by `spec`, from definitions:
    /// `G_k` as the even leaf permutations, derived kinds as commutator
    /// closures.
    pub fn enumerate(&self, spec: &SubgroupSpec) -> Result<ElementSet> {
        let sig = spec.signature();
        self.check_enumeration(&sig.group_order())?;
        match spec.kind() {
            SubgroupKind::Full => self.group_from(sig, TreeAutomorphism::all(sig)),
            SubgroupKind::SylowA => self.group_from(
                sig,
                TreeAutomorphism::all(sig).filter(|g| leaf_sign(g) == 1),
            ),
            SubgroupKind::Derived => {
                let full = self.enumerate(&SubgroupSpec::new(SubgroupKind::Full, sig.clone())?)?;
                self.derived_closure(&full)
            }
            SubgroupKind::SylowADerived => {
                let even =
                    self.enumerate(&SubgroupSpec::new(SubgroupKind::SylowA, sig.clone())?)?;
                self.derived_closure(&even)
            }
        }
    }

    fn group_from(
        &self,
        sig: &WreathSignature,
        elements: impl Iterator<Item = TreeAutomorphism>,
    ) -> Result<ElementSet> {
        let mut set = ElementSet::from_elements(sig, elements)?;
        if !set.verify_group() {
            return Err(Error::VerificationFailed(
                "enumerated set is not closed under products".into(),
            ));
        }
        Ok(set)
    }

    /// The subgroup generated by all commutators of `set`.
    ///
    /// Computed as the normal closure of the commutators of a generating set,
    /// which is the same subgroup.
    pub fn derived_closure(&self, set: &ElementSet) -> Result<ElementSet> {
        self.check_enumeration(&BigUint::from(set.len()))?;
        let gens = set.require_group()?;
        let mut closure = Closure::new(set.signature());
        for (i, a) in gens.iter().enumerate() {
            for b in &gens[i + 1..] {
                closure.add_generator(a.commutator(b)?);
            }
        }
        // normal closure: conjugate subgroup generators by group generators
        let mut i = 0;
        while i < closure.generators.len() {
            let n = closure.generators[i].clone();
            for g in gens {
                closure.add_generator(n.conjugate(g)?);
            }
            i += 1;
        }
        Ok(ElementSet::from_closure(closure))
    }

    /// `{[a, b] : a, b ∈ set}` with no closure applied.
    pub fn commutator_set(&self, set: &ElementSet) -> Result<ElementSet> {
        self.commutator_set_between(set, set)
    }

    /// `{[a, b] : a ∈ left, b ∈ right}`.
    pub fn commutator_set_between(
        &self,
        left: &ElementSet,
        right: &ElementSet,
    ) -> Result<ElementSet> {
        self.check_quadratic(left.len().max(right.len()))?;
        let mut out = HashSet::new();
        for a in left.iter() {
            let a_inv = a.inverse();
            for b in right.iter() {
                out.insert(&(&(a * b) * &a_inv) * &b.inverse());
            }
        }
        ElementSet::from_elements(left.signature(), out)
    }

    /// Exact commutator width: the least `n` such that products of `n`
    /// commutators cover the derived subgroup; 0 for abelian groups.
    pub fn commutator_width(&self, set: &ElementSet) -> Result<usize> {
        let commutators = self.commutator_set(set)?;
        let derived = self.derived_closure(set)?;
        if derived.len() == 1 {
            return Ok(0);
        }
        let mut covered: HashSet<TreeAutomorphism> = commutators.iter().cloned().collect();
        let mut width = 1;
        while covered.len() < derived.len() {
            let next: HashSet<_> = covered
                .iter()
                .flat_map(|c| commutators.iter().map(move |k| c * k))
                .collect();
            if next.len() == covered.len() {
                return Err(Error::VerificationFailed(
                    "products of commutators stopped growing before covering the derived subgroup"
                        .into(),
                ));
            }
            covered = next;
            width += 1;
        }
        Ok(width)
    }

    /// `{z ∈ set : zg = gz for all g ∈ set}`.
    pub fn center(&self, set: &ElementSet) -> Result<ElementSet> {
        self.check_enumeration(&BigUint::from(set.len()))?;
        let gens = set.require_group()?;
        let mut center = ElementSet::from_elements(
            set.signature(),
            set.iter().filter(|z| commutes_with_all(z, gens)).cloned(),
        )?;
        center.verify_group();
        Ok(center)
    }

    /// `{g ∈ set : gs = sg for all s ∈ sub}`.
    pub fn centralizer(&self, set: &ElementSet, sub: &ElementSet) -> Result<ElementSet> {
        self.check_enumeration(&BigUint::from(set.len()))?;
        if !sub.is_subset_of(set) {
            return Err(Error::NotSubset(
                "centralized set is not contained in the ambient set".into(),
            ));
        }
        let tests = sub.generators().unwrap_or(sub.members());
        let mut out = ElementSet::from_elements(
            set.signature(),
            set.iter().filter(|g| commutes_with_all(g, tests)).cloned(),
        )?;
        out.verify_group();
        Ok(out)
    }
}

fn commutes_with_all(z: &TreeAutomorphism, others: &[TreeAutomorphism]) -> bool {
    others.iter().all(|g| z * g == g * z)
}

/// Test aid for the bound `cw(B ≀ C_p) ≤ max(1, cw(B))`.
///
/// Given the first `p - 1` sections `r` and a base element written as a
/// product `x = ∏ [f_j, g_j]`, returns the target
/// `w = (r_1, ..., r_{p-1}, r_1^-1 ... r_{p-1}^-1 x)` together with commutator
/// pairs `(u_j, v_j)` such that `w = ∏ [u_j, v_j]`: the first pair is the lift
/// of `[f_1, g_1]`, the rest are `[(e, ..., e, f_j), (e, ..., e, g_j)]`.
pub fn split_commutator_product(
    r: &[TreeAutomorphism],
    base: &[(TreeAutomorphism, TreeAutomorphism)],
) -> Result<(TreeAutomorphism, Vec<(TreeAutomorphism, TreeAutomorphism)>)> {
    let ((f1, g1), rest) = base
        .split_first()
        .ok_or_else(|| Error::Unsupported("need at least one base commutator".into()))?;
    let first = lift_commutator(r, f1, g1)?;
    let sig = first.target.signature().clone();
    let tail = sig
        .tail()
        .expect("lifted element has depth at least 2")
        .clone();
    let e = TreeAutomorphism::identity(&tail);
    let embed = |h: &TreeAutomorphism| {
        let mut sections = vec![e.clone(); r.len()];
        sections.push(h.clone());
        TreeAutomorphism::from_sections(&sig, 0, &sections)
    };
    let mut target = first.target.clone();
    let mut pairs = vec![(first.left, first.right)];
    for (f, g) in rest {
        let (u, v) = (embed(f)?, embed(g)?);
        target = &target * &u.commutator(&v)?;
        pairs.push((u, v));
    }
    Ok((target, pairs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(kind: SubgroupKind, sig: WreathSignature) -> SubgroupSpec {
        SubgroupSpec::new(kind, sig).unwrap()
    }

    fn b(k: usize) -> WreathSignature {
        WreathSignature::binary(k).unwrap()
    }

    /// Closure of all pairwise commutators, iterated to a fixpoint.
    fn literal_derived_closure(set: &ElementSet) -> HashSet<TreeAutomorphism> {
        let mut current: HashSet<_> = set
            .iter()
            .flat_map(|a| set.iter().map(move |b| a.commutator(b).unwrap()))
            .collect();
        loop {
            let next: HashSet<_> = current
                .iter()
                .flat_map(|a| current.iter().map(move |b| a * b))
                .collect();
            if next.len() == current.len() {
                return current;
            }
            current = next;
        }
    }

    #[test]
    fn enumerate_examples() {
        let o = Oracle::default();
        assert_eq!(
            o.enumerate(&spec(SubgroupKind::Full, b(2))).unwrap().len(),
            8
        );
        assert_eq!(
            o.enumerate(&spec(SubgroupKind::Full, b(3))).unwrap().len(),
            128
        );
        let k4 = o.enumerate(&spec(SubgroupKind::SylowA, b(2))).unwrap();
        assert_eq!(k4.len(), 4);
        assert!(k4.iter().all(|g| g.pow(2).is_identity()));
        let tiny = Oracle {
            enumeration_cap: 100,
            ..Oracle::default()
        };
        assert!(matches!(
            tiny.enumerate(&spec(SubgroupKind::Full, b(3))),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn derived_closure_matches_literal_fixpoint() {
        let o = Oracle::default();
        for sig in [
            b(2),
            b(3),
            WreathSignature::uniform(3, 2).unwrap(),
            WreathSignature::new(vec![2, 3]).unwrap(),
        ] {
            let full = o.enumerate(&spec(SubgroupKind::Full, sig.clone())).unwrap();
            let derived = o.derived_closure(&full).unwrap();
            let literal = literal_derived_closure(&full);
            assert_eq!(derived.len(), literal.len(), "{sig}");
            assert!(derived.iter().all(|g| literal.contains(g)));
        }
    }

    #[test]
    fn derived_closure_examples() {
        let o = Oracle::default();
        let b2 = o.enumerate(&spec(SubgroupKind::Full, b(2))).unwrap();
        let d = o.derived_closure(&b2).unwrap();
        assert_eq!(d.render_lines().collect::<Vec<_>>(), vec!["0|00", "0|11"]);
        let g2 = o.enumerate(&spec(SubgroupKind::SylowA, b(2))).unwrap();
        assert_eq!(o.derived_closure(&g2).unwrap().len(), 1);
        let c3 = o
            .enumerate(&spec(
                SubgroupKind::Full,
                WreathSignature::uniform(3, 2).unwrap(),
            ))
            .unwrap();
        assert_eq!(o.derived_closure(&c3).unwrap().len(), 9);
    }

    #[test]
    fn non_groups_are_rejected() {
        let sig = b(2);
        let mut set = ElementSet::from_elements(
            &sig,
            ["0|00", "1|00", "0|10"].map(|s| TreeAutomorphism::parse(&sig, s).unwrap()),
        )
        .unwrap();
        assert!(!set.verify_group());
        assert!(Oracle::default().derived_closure(&set).is_err());
        let mut empty = ElementSet::from_elements(&sig, []).unwrap();
        assert!(!empty.verify_group());
    }

    #[test]
    fn commutator_width_examples() {
        let o = Oracle::default();
        let g2 = o.enumerate(&spec(SubgroupKind::SylowA, b(2))).unwrap();
        assert_eq!(o.commutator_width(&g2).unwrap(), 0);
        let b3 = o.enumerate(&spec(SubgroupKind::Full, b(3))).unwrap();
        assert_eq!(o.commutator_width(&b3).unwrap(), 1);
        let b1 = o.enumerate(&spec(SubgroupKind::Full, b(1))).unwrap();
        assert_eq!(o.commutator_width(&b1).unwrap(), 0);
    }

    #[test]
    fn quadratic_cap_is_enforced() {
        let o = Oracle {
            quadratic_cap: 64,
            ..Oracle::default()
        };
        let b3 = o.enumerate(&spec(SubgroupKind::Full, b(3))).unwrap();
        assert!(matches!(
            o.commutator_set(&b3),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn center_and_centralizer() {
        let o = Oracle::default();
        let g2 = o.enumerate(&spec(SubgroupKind::SylowA, b(2))).unwrap();
        assert_eq!(o.center(&g2).unwrap(), g2);
        let b3 = o.enumerate(&spec(SubgroupKind::Full, b(3))).unwrap();
        let z = o.center(&b3).unwrap();
        assert_eq!(
            z.render_lines().collect::<Vec<_>>(),
            vec!["0|00|0000", "0|00|1111"]
        );
        assert_eq!(o.centralizer(&b3, &b3).unwrap(), z);
        let mut trivial =
            ElementSet::from_elements(&b(3), [TreeAutomorphism::identity(&b(3))]).unwrap();
        assert!(trivial.verify_group());
        assert_eq!(o.centralizer(&b3, &trivial).unwrap(), b3);
        assert!(o.centralizer(&trivial, &b3).is_err());
    }

    #[test]
    fn leaf_sign_examples() {
        let sig = b(2);
        let el = |s| TreeAutomorphism::parse(&sig, s).unwrap();
        assert_eq!(leaf_sign(&el("0|00")), 1);
        assert_eq!(leaf_sign(&el("0|10")), -1);
        assert_eq!(leaf_sign(&el("1|00")), 1);
    }

    #[test]
    fn split_product_reassembles_target() {
        let tail = b(2);
        let r = [TreeAutomorphism::random(&tail, 1)];
        let pairs: Vec<_> = (0..3)
            .map(|i| {
                (
                    TreeAutomorphism::random(&tail, 10 + i),
                    TreeAutomorphism::random(&tail, 20 + i),
                )
            })
            .collect();
        let (target, split) = split_commutator_product(&r, &pairs).unwrap();
        let product = split
            .iter()
            .map(|(u, v)| u.commutator(v).unwrap())
            .fold(TreeAutomorphism::identity(target.signature()), |acc, c| {
                &acc * &c
            });
        assert_eq!(product, target);
        let x = pairs
            .iter()
            .map(|(f, g)| f.commutator(g).unwrap())
            .fold(TreeAutomorphism::identity(&tail), |acc, c| &acc * &c);
        let sections = target.sections();
        assert_eq!(sections[0], r[0]);
        assert_eq!(sections[1], &r[0].inverse() * &x);
    }
}
