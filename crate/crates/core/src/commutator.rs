//! Explicit single-commutator decompositions.
//!
//! Every element of the derived subgroup of an iterated wreath product of
//! cyclic groups, and of `G_k'`, is one commutator. The decompositions here
//! are constructive: a derived element `w = (r_1, ..., r_p)` is brought into
//! the form `(r_1, ..., r_{p-1}, r_1^-1 ... r_{p-1}^-1 [f, g])`, the residual
//! `x = r_{p-1} ... r_1 r_p = [f, g]` is decomposed one level down, and the
//! pair `(f, g)` is lifted by [`lift_commutator`].
//!
//! Every returned witness has been re-multiplied and checked; a failed check
//! is reported as [`Error::VerificationFailed`].

use crate::error::{Error, Result};
use crate::membership::{in_derived_bk, in_derived_gk, in_derived_wreath, in_gk, SubgroupKind};
use crate::portrait::TreeAutomorphism;
use crate::signature::WreathSignature;

/// A certificate that `target = [left, right]`, with the subgroups the
/// witnesses are claimed to lie in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutatorWitness {
    pub target: TreeAutomorphism,
    pub left: TreeAutomorphism,
    pub right: TreeAutomorphism,
    pub left_set: SubgroupKind,
    pub right_set: SubgroupKind,
}

impl CommutatorWitness {
    /// Re-checks `[left, right] = target` and both subgroup tags.
    pub fn verify(&self) -> Result<()> {
        let product = self.left.commutator(&self.right)?;
        if product != self.target {
            return Err(Error::VerificationFailed(format!(
                "[{}, {}] = {}, expected {}",
                self.left, self.right, product, self.target
            )));
        }
        for (g, kind) in [(&self.left, self.left_set), (&self.right, self.right_set)] {
            if !tag_holds(g, kind)? {
                return Err(Error::VerificationFailed(format!("{g} is not in {kind}")));
            }
        }
        Ok(())
    }

    /// The witness as the JSON object emitted by the command line.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "target": self.target.render(),
            "left": self.left.render(),
            "right": self.right.render(),
            "left_set": self.left_set.name(),
            "right_set": self.right_set.name(),
            "verified": self.verify().is_ok(),
        })
    }
}

fn tag_holds(g: &TreeAutomorphism, kind: SubgroupKind) -> Result<bool> {
    match kind {
        SubgroupKind::Full => Ok(true),
        SubgroupKind::Derived if g.signature().is_binary() => in_derived_bk(g),
        SubgroupKind::Derived => Ok(in_derived_wreath(g)),
        SubgroupKind::SylowA => in_gk(g),
        SubgroupKind::SylowADerived => in_derived_gk(g),
    }
}

/// `x = r_{p-1} ... r_1 r_p` for `w = (r_1, ..., r_p)`; `w ∈ W'` iff `x` lies in
/// the derived subgroup one level down.
pub fn residual_product(w: &TreeAutomorphism) -> Result<TreeAutomorphism> {
    if w.root_label() != 0 {
        return Err(Error::RootNotTrivial(w.root_label()));
    }
    let sections = w.sections();
    let (last, rest) = sections.split_last().ok_or(Error::DepthTooSmall {
        required: 2,
        actual: w.depth(),
    })?;
    let mut x = last.clone();
    for r in rest {
        x = r * &x;
    }
    Ok(x)
}

/// Lifts `[f, g]` one level up.
///
/// Builds `w = (r_1, ..., r_{p-1}, r_1^-1 ... r_{p-1}^-1 [f, g])` on the tree with
/// root arity `p = r.len() + 1` and returns `w = [(e, ..., e, a_{1,p}) σ,
/// (a_{2,1}, ..., a_{2,p})]` where
///
/// ```text
/// a_{2,1} = (f^-1)^(r_1^-1 ... r_{p-1}^-1)
/// a_{2,i} = r_{i-1} a_{2,i-1}
/// a_{1,p} = g^(a_{2,p}^-1)
/// ```
///
/// with `a^b = b a b^-1`.
pub fn lift_commutator(
    r: &[TreeAutomorphism],
    f: &TreeAutomorphism,
    g: &TreeAutomorphism,
) -> Result<CommutatorWitness> {
    let Some(first) = r.first() else {
        return Err(Error::Unsupported(
            "need at least one section (p >= 2)".into(),
        ));
    };
    let tail = first.signature();
    let mut arities = vec![r.len() as u32 + 1];
    arities.extend_from_slice(tail.arities());
    let sig = WreathSignature::new(arities)?;
    lift_in(&sig, r, f, g)
}

fn lift_in(
    sig: &WreathSignature,
    r: &[TreeAutomorphism],
    f: &TreeAutomorphism,
    g: &TreeAutomorphism,
) -> Result<CommutatorWitness> {
    let tail = sig.tail().expect("lift target has depth at least 2");
    for h in r.iter().chain([f, g]) {
        if h.signature() != tail {
            return Err(Error::SignatureMismatch {
                left: tail.to_string(),
                right: h.signature().to_string(),
            });
        }
    }
    debug_assert_eq!(r.len() + 1, sig.arity(0) as usize);

    let identity = TreeAutomorphism::identity(tail);
    let r_inv = r
        .iter()
        .fold(identity.clone(), |acc, ri| &acc * &ri.inverse());
    let fg = f.commutator(g)?;

    let mut target_sections = r.to_vec();
    target_sections.push(&r_inv * &fg);
    let target = TreeAutomorphism::from_sections(sig, 0, &target_sections)?;

    let mut a2 = Vec::with_capacity(r.len() + 1);
    a2.push(f.inverse().conjugate(&r_inv)?);
    for ri in r {
        let next = ri * a2.last().expect("nonempty");
        a2.push(next);
    }
    let a1p = g.conjugate(&a2.last().expect("nonempty").inverse())?;

    let mut a1 = vec![identity; r.len()];
    a1.push(a1p);
    let left = TreeAutomorphism::from_sections(sig, 1, &a1)?;
    let right = TreeAutomorphism::from_sections(sig, 0, &a2)?;

    let witness = CommutatorWitness {
        target,
        left,
        right,
        left_set: SubgroupKind::Full,
        right_set: SubgroupKind::Full,
    };
    witness.verify()?;
    Ok(witness)
}

fn identity_witness(
    w: &TreeAutomorphism,
    left_set: SubgroupKind,
    right_set: SubgroupKind,
) -> CommutatorWitness {
    let e = TreeAutomorphism::identity(w.signature());
    CommutatorWitness {
        target: w.clone(),
        left: e.clone(),
        right: e,
        left_set,
        right_set,
    }
}

/// Writes `w ∈ W'` as one commutator of elements of the full wreath product.
pub fn decompose_derived_wreath(w: &TreeAutomorphism) -> Result<CommutatorWitness> {
    if !in_derived_wreath(w) {
        return Err(Error::NotInSubgroup {
            element: w.render(),
            kind: SubgroupKind::Derived,
        });
    }
    wreath_witness(w)
}

fn wreath_witness(w: &TreeAutomorphism) -> Result<CommutatorWitness> {
    let sig = w.signature();
    if sig.depth() == 1 {
        // W' is trivial for a cyclic group
        return Ok(identity_witness(w, SubgroupKind::Full, SubgroupKind::Full));
    }
    let x = residual_product(w)?;
    let inner = wreath_witness(&x)?;
    let sections = w.sections();
    let lifted = lift_in(
        sig,
        &sections[..sections.len() - 1],
        &inner.left,
        &inner.right,
    )?;
    if lifted.target != *w {
        return Err(Error::VerificationFailed(format!(
            "lift rebuilt {}, expected {w}",
            lifted.target
        )));
    }
    Ok(lifted)
}

/// Writes `w ∈ B_k'` as `[l, f]` with `l ∈ G_k` and `f ∈ B_k`.
pub fn decompose_bk_with_gk_witness(w: &TreeAutomorphism) -> Result<CommutatorWitness> {
    if !in_derived_bk(w)? {
        return Err(Error::NotInSubgroup {
            element: w.render(),
            kind: SubgroupKind::Derived,
        });
    }
    let witness = bk_witness(w)?;
    witness.verify()?;
    Ok(witness)
}

fn bk_witness(w: &TreeAutomorphism) -> Result<CommutatorWitness> {
    let sig = w.signature();
    if sig.depth() == 1 {
        return Ok(identity_witness(
            w,
            SubgroupKind::SylowA,
            SubgroupKind::Full,
        ));
    }
    let sections = w.sections();
    let x = &sections[0] * &sections[1];
    let mut lifted = lift_with_g_in_gk(sig, &sections[0], &x)?;
    if lifted.target != *w {
        return Err(Error::VerificationFailed(format!(
            "lift rebuilt {}, expected {w}",
            lifted.target
        )));
    }
    lifted.left_set = SubgroupKind::SylowA;
    Ok(lifted)
}

/// Lifts `x ∈ B_{k-1}'` with first section `r_1`, choosing `x = [f, g]` with
/// `g ∈ G_{k-1}`: decompose `x^-1 = [l, f]` and use `[l, f]^-1 = [f, l]`.
fn lift_with_g_in_gk(
    sig: &WreathSignature,
    r1: &TreeAutomorphism,
    x: &TreeAutomorphism,
) -> Result<CommutatorWitness> {
    let inner = bk_witness(&x.inverse())?;
    lift_in(sig, std::slice::from_ref(r1), &inner.right, &inner.left)
}

/// Writes `w ∈ G_k'` as a commutator of two elements of `G_k`.
pub fn decompose_gk(w: &TreeAutomorphism) -> Result<CommutatorWitness> {
    if !in_derived_gk(w)? {
        return Err(Error::NotInSubgroup {
            element: w.render(),
            kind: SubgroupKind::SylowADerived,
        });
    }
    let sig = w.signature();
    let sections = w.sections();
    let x = &sections[0] * &sections[1];
    let mut witness = lift_with_g_in_gk(sig, &sections[0], &x)?;
    if witness.target != *w {
        return Err(Error::VerificationFailed(format!(
            "lift rebuilt {}, expected {w}",
            witness.target
        )));
    }
    witness.left_set = SubgroupKind::SylowA;
    witness.right_set = SubgroupKind::SylowA;
    witness.verify()?;
    Ok(witness)
}
