//! Membership tests and uniform samplers for the subgroups
//! `B_k ⊃ G_k ⊃ G_k'` and `B_k'`, plus the derived subgroup of an arbitrary
//! cyclic tower.
//!
//! Here `B_k` is the full wreath power of `C_2` (a Sylow 2-subgroup of
//! `S_{2^k}`) and `G_k` its index-2 subgroup of elements acting evenly on the
//! leaves (a Sylow 2-subgroup of `A_{2^k}`). All criteria are recursive on the
//! wreath recursion `g = (g_1, ..., g_p) σ^a` or read off level indices; none
//! of them enumerates the group.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::portrait::TreeAutomorphism;
use crate::signature::WreathSignature;

/// Default bound on the number of elements scanned when a closed form is not
/// available.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SubgroupKind {
    /// The full wreath product `W` (`B_k` for binary signatures).
    Full,
    /// `W'`.
    Derived,
    /// `G_k`; binary signatures only.
    SylowA,
    /// `G_k'`; binary signatures of depth at least 2.
    SylowADerived,
}

impl SubgroupKind {
    pub const ALL: [SubgroupKind; 4] = [
        SubgroupKind::Full,
        SubgroupKind::Derived,
        SubgroupKind::SylowA,
        SubgroupKind::SylowADerived,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SubgroupKind::Full => "full",
            SubgroupKind::Derived => "derived",
            SubgroupKind::SylowA => "sylow-a",
            SubgroupKind::SylowADerived => "sylow-a-derived",
        }
    }
}

impl fmt::Display for SubgroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SubgroupKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SubgroupKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Unsupported(format!("unknown subgroup kind {s:?}")))
    }
}

impl serde::Serialize for SubgroupKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// A subgroup kind together with the tree it lives on.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubgroupSpec {
    kind: SubgroupKind,
    signature: WreathSignature,
}

impl SubgroupSpec {
    pub fn new(kind: SubgroupKind, signature: WreathSignature) -> Result<Self> {
        match kind {
            SubgroupKind::SylowA => signature.ensure_binary()?,
            SubgroupKind::SylowADerived => {
                signature.ensure_binary()?;
                ensure_depth(&signature, 2)?;
            }
            SubgroupKind::Full | SubgroupKind::Derived => {}
        }
        Ok(SubgroupSpec { kind, signature })
    }

    pub fn kind(&self) -> SubgroupKind {
        self.kind
    }

    pub fn signature(&self) -> &WreathSignature {
        &self.signature
    }

    /// Decides membership with the recursive criteria of this module.
    pub fn contains(&self, g: &TreeAutomorphism) -> Result<bool> {
        if g.signature() != &self.signature {
            return Err(Error::SignatureMismatch {
                left: self.signature.to_string(),
                right: g.signature().to_string(),
            });
        }
        match self.kind {
            SubgroupKind::Full => Ok(true),
            SubgroupKind::Derived if self.signature.is_binary() => in_derived_bk(g),
            SubgroupKind::Derived => Ok(in_derived_wreath(g)),
            SubgroupKind::SylowA => in_gk(g),
            SubgroupKind::SylowADerived => in_derived_gk(g),
        }
    }

    pub fn order(&self) -> Result<BigUint> {
        subgroup_order(self)
    }

    pub fn random_member(&self, seed: u64) -> Result<TreeAutomorphism> {
        random_member(self, seed)
    }
}

fn ensure_depth(sig: &WreathSignature, required: usize) -> Result<()> {
    if sig.depth() < required {
        Err(Error::DepthTooSmall {
            required,
            actual: sig.depth(),
        })
    } else {
        Ok(())
    }
}

fn product(elements: &[TreeAutomorphism]) -> TreeAutomorphism {
    let mut iter = elements.iter();
    let first = iter.next().expect("at least one section").clone();
    iter.fold(first, |acc, s| &acc * s)
}

/// `g ∈ W'` for the full wreath product `W` of `g`'s signature.
///
/// The root label must vanish and the product of the level-1 sections, taken
/// left to right, must lie in the derived subgroup one level down. At depth 1
/// the group is cyclic and only the identity qualifies.
pub fn in_derived_wreath(g: &TreeAutomorphism) -> bool {
    if g.root_label() != 0 {
        return false;
    }
    let sections = g.sections();
    if sections.is_empty() {
        return true;
    }
    in_derived_wreath(&product(&sections))
}

/// `g ∈ B_k'`: every level index is even.
pub fn in_derived_bk(g: &TreeAutomorphism) -> Result<bool> {
    g.signature().ensure_binary()?;
    Ok(g.index_vector().all_even())
}

/// `g ∈ G_k`: the product of the two level-1 sections lies in `G_{k-1}`,
/// with `G_1` trivial.
pub fn in_gk(g: &TreeAutomorphism) -> Result<bool> {
    g.signature().ensure_binary()?;
    Ok(in_gk_rec(g))
}

fn in_gk_rec(g: &TreeAutomorphism) -> bool {
    let sections = g.sections();
    if sections.is_empty() {
        return g.is_identity();
    }
    in_gk_rec(&(&sections[0] * &sections[1]))
}

/// `g ∈ G_k'` via the section criterion: `g = (g_1, g_2)` with trivial root,
/// `g_1, g_2 ∈ G_{k-1}` and `g_1 g_2 ∈ B_{k-1}'`.
pub fn in_derived_gk(g: &TreeAutomorphism) -> Result<bool> {
    g.signature().ensure_binary()?;
    ensure_depth(g.signature(), 2)?;
    if g.root_label() != 0 {
        return Ok(false);
    }
    let s = g.sections();
    Ok(in_gk_rec(&s[0]) && in_gk_rec(&s[1]) && (&s[0] * &s[1]).index_vector().all_even())
}

/// `g ∈ G_k'` via level indices: even index on every level above `k - 1`, and
/// an even number of active vertices in each half of level `k - 1`.
pub fn in_derived_gk_by_index(g: &TreeAutomorphism) -> Result<bool> {
    let sig = g.signature();
    sig.ensure_binary()?;
    ensure_depth(sig, 2)?;
    let k = sig.depth();
    let counts = g.index_vector().counts;
    if counts[..k - 1].iter().any(|c| c % 2 != 0) {
        return Ok(false);
    }
    let last = g.level(k - 1);
    let (left, right) = last.split_at(last.len() / 2);
    let active = |half: &[u32]| half.iter().filter(|&&a| a != 0).count();
    Ok(active(left) % 2 == 0 && active(right) % 2 == 0)
}

/// Order of the subgroup.
///
/// Closed forms: `|W| = ∏ p_{l+1}^{|X^l|}`, `|G_k| = |B_k| / 2`,
/// `|B_k'| = 2^(2^k - 1 - k)` and `|G_k'| = 2^(2^k - k - 2)`. The derived
/// subgroup of a non-binary tower is counted by scanning the whole group,
/// which fails above [`DEFAULT_ENUMERATION_CAP`] elements.
pub fn subgroup_order(spec: &SubgroupSpec) -> Result<BigUint> {
    subgroup_order_with_cap(spec, DEFAULT_ENUMERATION_CAP)
}

pub fn subgroup_order_with_cap(spec: &SubgroupSpec, cap: u64) -> Result<BigUint> {
    let sig = spec.signature();
    let k = sig.depth() as u32;
    let two = BigUint::from(2u32);
    match spec.kind() {
        SubgroupKind::Full => Ok(sig.group_order()),
        SubgroupKind::SylowA => Ok(sig.group_order() / 2u32),
        SubgroupKind::Derived if sig.is_binary() => Ok(two.pow((1u32 << k) - 1 - k)),
        SubgroupKind::SylowADerived => Ok(two.pow((1u32 << k) - k - 2)),
        SubgroupKind::Derived => {
            let full = sig.group_order();
            if full > BigUint::from(cap) {
                return Err(Error::CapExceeded {
                    size: full.to_string(),
                    cap,
                });
            }
            let count = TreeAutomorphism::all(sig).filter(in_derived_wreath).count();
            Ok(BigUint::from(count))
        }
    }
}

/// Uniform element of the subgroup, deterministic per seed.
pub fn random_member(spec: &SubgroupSpec, seed: u64) -> Result<TreeAutomorphism> {
    Ok(random_member_with(
        spec,
        &mut ChaCha8Rng::seed_from_u64(seed),
    ))
}

/// Uniform element of the subgroup drawn from `rng`.
pub fn random_member_with<R: Rng + ?Sized>(spec: &SubgroupSpec, rng: &mut R) -> TreeAutomorphism {
    let sig = spec.signature();
    match spec.kind() {
        SubgroupKind::Full => TreeAutomorphism::random_with(sig, rng),
        SubgroupKind::Derived if sig.is_binary() => {
            let mut labels = Vec::with_capacity(sig.label_count());
            for level in 0..sig.depth() {
                push_even_bits(&mut labels, sig.level_size(level), rng);
            }
            TreeAutomorphism::from_flat_unchecked(sig, labels)
        }
        SubgroupKind::Derived => random_derived_wreath(sig, rng),
        SubgroupKind::SylowA => random_gk(sig, rng),
        SubgroupKind::SylowADerived => {
            let k = sig.depth();
            let mut labels = Vec::with_capacity(sig.label_count());
            for level in 0..k - 1 {
                push_even_bits(&mut labels, sig.level_size(level), rng);
            }
            let half = sig.level_size(k - 1) / 2;
            push_even_bits(&mut labels, half, rng);
            push_even_bits(&mut labels, half, rng);
            TreeAutomorphism::from_flat_unchecked(sig, labels)
        }
    }
}

/// Appends `n` uniform bits conditioned on an even number of ones.
fn push_even_bits<R: Rng + ?Sized>(labels: &mut Vec<u32>, n: usize, rng: &mut R) {
    let mut parity = 0;
    for _ in 1..n {
        let bit = rng.gen_range(0..2u32);
        parity ^= bit;
        labels.push(bit);
    }
    if n > 0 {
        labels.push(parity);
    }
}

/// `(r_1, ..., r_{p-1}, (r_1 ... r_{p-1})^-1 x)` with the `r_i` uniform and `x`
/// uniform in the derived subgroup one level down.
fn random_derived_wreath<R: Rng + ?Sized>(sig: &WreathSignature, rng: &mut R) -> TreeAutomorphism {
    let Some(tail) = sig.tail() else {
        return TreeAutomorphism::identity(sig);
    };
    let p = sig.arity(0) as usize;
    let mut sections: Vec<_> = (0..p - 1)
        .map(|_| TreeAutomorphism::random_with(tail, rng))
        .collect();
    let prefix = product(&sections);
    let x = random_derived_wreath(tail, rng);
    sections.push(&prefix.inverse() * &x);
    TreeAutomorphism::from_sections(sig, 0, &sections).expect("sections match the tail signature")
}

/// `(g_1, g_1^-1 h) σ^a` with `g_1` uniform in `B_{k-1}`, `h` uniform in `G_{k-1}`.
fn random_gk<R: Rng + ?Sized>(sig: &WreathSignature, rng: &mut R) -> TreeAutomorphism {
    let Some(tail) = sig.tail() else {
        return TreeAutomorphism::identity(sig);
    };
    let root = rng.gen_range(0..2);
    let g1 = TreeAutomorphism::random_with(tail, rng);
    let h = random_gk(tail, rng);
    let g2 = &g1.inverse() * &h;
    TreeAutomorphism::from_sections(sig, root, &[g1, g2])
        .expect("sections match the tail signature")
}
