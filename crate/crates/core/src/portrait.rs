//! Tree automorphisms stored as portraits.
//!
//! A portrait assigns every internal vertex a rotation of its children. The
//! vertex `v` on level `l` with label `a` sends its child `vx` to
//! `v((x + a) mod p_{l+1})`. Leaves are words over the alphabets, ordered
//! lexicographically; vertices are numbered level by level, left to right, so
//! the children of vertex `j` on level `l` are `j * p + x` on level `l + 1`.
//!
//! Products are read left to right: `g * h` applies `g` first, then `h`. With
//! this orientation the wreath recursion is
//!
//! ```text
//! (g * h)|_x = g|_x * h|_{σ_g(x)},    σ_{g*h} = σ_g then σ_h,
//! ```
//!
//! and `leaf_permutation` is a homomorphism onto leaf permutations composed
//! in the same order.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Mul;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::leaf::LeafPermutation;
use crate::signature::WreathSignature;

/// An automorphism of the depth-`k` tree of a [`WreathSignature`].
#[derive(Clone)]
pub struct TreeAutomorphism {
    sig: WreathSignature,
    /// Level-order labels; level `l` occupies `sig.offset(l)..` for
    /// `sig.level_size(l)` entries.
    labels: Box<[u32]>,
}

/// Number of active (nonzero) labels per level.
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize)]
pub struct LevelIndexVector {
    pub counts: Vec<usize>,
}

impl LevelIndexVector {
    pub fn all_even(&self) -> bool {
        self.counts.iter().all(|c| c % 2 == 0)
    }
}

impl TreeAutomorphism {
    pub fn identity(sig: &WreathSignature) -> Self {
        TreeAutomorphism {
            sig: sig.clone(),
            labels: vec![0; sig.label_count()].into_boxed_slice(),
        }
    }

    /// Builds an element from level-by-level labels, reducing nothing: every
    /// label must already be below its level's arity.
    pub fn from_levels(sig: &WreathSignature, levels: &[Vec<u32>]) -> Result<Self> {
        if levels.len() != sig.depth() {
            return Err(Error::Parse {
                text: format!("{levels:?}"),
                reason: format!("expected {} levels, got {}", sig.depth(), levels.len()),
            });
        }
        let mut labels = Vec::with_capacity(sig.label_count());
        for (level, row) in levels.iter().enumerate() {
            check_level(sig, level, row).map_err(|reason| Error::Parse {
                text: format!("{levels:?}"),
                reason,
            })?;
            labels.extend_from_slice(row);
        }
        Ok(TreeAutomorphism {
            sig: sig.clone(),
            labels: labels.into_boxed_slice(),
        })
    }

    pub(crate) fn from_flat_unchecked(sig: &WreathSignature, labels: Vec<u32>) -> Self {
        debug_assert_eq!(labels.len(), sig.label_count());
        TreeAutomorphism {
            sig: sig.clone(),
            labels: labels.into_boxed_slice(),
        }
    }

    /// Wreath recursion `(s_1, ..., s_p) σ^root`.
    pub fn from_sections(
        sig: &WreathSignature,
        root: u32,
        sections: &[TreeAutomorphism],
    ) -> Result<Self> {
        let p = sig.arity(0);
        if root >= p {
            return Err(Error::Parse {
                text: root.to_string(),
                reason: format!("root label must be below {p}"),
            });
        }
        let Some(tail) = sig.tail() else {
            if sections.is_empty() {
                return Ok(Self::from_flat_unchecked(sig, vec![root]));
            }
            return Err(Error::Unsupported(
                "depth-1 elements have no sections".into(),
            ));
        };
        if sections.len() != p as usize {
            return Err(Error::Unsupported(format!(
                "expected {p} sections, got {}",
                sections.len()
            )));
        }
        for s in sections {
            if s.sig != *tail {
                return Err(Error::SignatureMismatch {
                    left: tail.to_string(),
                    right: s.sig.to_string(),
                });
            }
        }
        let mut labels = Vec::with_capacity(sig.label_count());
        labels.push(root);
        for level in 0..tail.depth() {
            for s in sections {
                labels.extend_from_slice(s.level(level));
            }
        }
        Ok(Self::from_flat_unchecked(sig, labels))
    }

    pub fn signature(&self) -> &WreathSignature {
        &self.sig
    }

    pub fn depth(&self) -> usize {
        self.sig.depth()
    }

    /// Labels of one level, in vertex order.
    pub fn level(&self, level: usize) -> &[u32] {
        let start = self.sig.offset(level);
        &self.labels[start..start + self.sig.level_size(level)]
    }

    pub fn levels(&self) -> impl Iterator<Item = &[u32]> + '_ {
        (0..self.depth()).map(move |l| self.level(l))
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn root_label(&self) -> u32 {
        self.labels[0]
    }

    pub fn is_identity(&self) -> bool {
        self.labels.iter().all(|&a| a == 0)
    }

    /// Parses the portrait text format: levels joined by `|`, root first.
    ///
    /// Labels within a level are bare digits when every arity is at most 9,
    /// and comma-separated decimals otherwise. The comma form is also accepted
    /// for small arities.
    pub fn parse(sig: &WreathSignature, text: &str) -> Result<Self> {
        let err = |reason: String| Error::Parse {
            text: text.to_string(),
            reason,
        };
        let text = text.trim();
        let parts: Vec<&str> = text.split('|').collect();
        if parts.len() != sig.depth() {
            return Err(err(format!(
                "expected {} levels, got {}",
                sig.depth(),
                parts.len()
            )));
        }
        let wide = sig.arities().iter().any(|&p| p >= 10);
        let mut labels = Vec::with_capacity(sig.label_count());
        for (level, part) in parts.iter().enumerate() {
            let row: Vec<u32> = if wide || part.contains(',') {
                part.split(',')
                    .map(|t| {
                        if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                            return Err(err(format!("bad label {t:?} on level {level}")));
                        }
                        t.parse::<u32>()
                            .map_err(|_| err(format!("bad label {t:?} on level {level}")))
                    })
                    .collect::<Result<_>>()?
            } else {
                part.chars()
                    .map(|c| {
                        c.to_digit(10)
                            .ok_or_else(|| err(format!("bad character {c:?} on level {level}")))
                    })
                    .collect::<Result<_>>()?
            };
            check_level(sig, level, &row).map_err(err)?;
            labels.extend(row);
        }
        Ok(Self::from_flat_unchecked(sig, labels))
    }

    /// Canonical portrait text; inverse of [`parse`](Self::parse).
    pub fn render(&self) -> String {
        let wide = self.sig.arities().iter().any(|&p| p >= 10);
        let mut out = String::with_capacity(self.labels.len() * if wide { 3 } else { 1 } + 8);
        for (l, row) in self.levels().enumerate() {
            if l > 0 {
                out.push('|');
            }
            for (i, a) in row.iter().enumerate() {
                if wide {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push_str(&a.to_string());
                } else {
                    out.push(char::from_digit(*a, 10).expect("label below 10"));
                }
            }
        }
        out
    }

    fn ensure_same(&self, other: &Self) -> Result<()> {
        if self.sig == other.sig {
            Ok(())
        } else {
            Err(Error::SignatureMismatch {
                left: self.sig.to_string(),
                right: other.sig.to_string(),
            })
        }
    }

    /// `self * other`: apply `self`, then `other`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.ensure_same(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let sig = &self.sig;
        let mut out = vec![0u32; self.labels.len()];
        // image[j] = position of self(v_j) for the vertices v_j of the current level
        let mut image = vec![0usize];
        for level in 0..sig.depth() {
            let p = sig.arity(level);
            let offset = sig.offset(level);
            let mine = &self.labels[offset..offset + image.len()];
            let theirs = &other.labels[offset..offset + image.len()];
            for (j, &img) in image.iter().enumerate() {
                out[offset + j] = (mine[j] + theirs[img]) % p;
            }
            if level + 1 < sig.depth() {
                image = next_level_image(&image, mine, p);
            }
        }
        Self::from_flat_unchecked(sig, out)
    }

    pub fn inverse(&self) -> Self {
        let sig = &self.sig;
        let mut out = vec![0u32; self.labels.len()];
        let mut image = vec![0usize];
        for level in 0..sig.depth() {
            let p = sig.arity(level);
            let offset = sig.offset(level);
            let mine = &self.labels[offset..offset + image.len()];
            // (g^-1)|_{g(v)} = (g|_v)^-1
            for (j, &img) in image.iter().enumerate() {
                out[offset + img] = (p - mine[j]) % p;
            }
            if level + 1 < sig.depth() {
                image = next_level_image(&image, mine, p);
            }
        }
        Self::from_flat_unchecked(sig, out)
    }

    /// `[a, b] = a b a^-1 b^-1`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.ensure_same(other)?;
        Ok(&(&(self * other) * &self.inverse()) * &other.inverse())
    }

    /// `self^by = by · self · by^-1`.
    pub fn conjugate(&self, by: &Self) -> Result<Self> {
        self.ensure_same(by)?;
        Ok(&(by * self) * &by.inverse())
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(&self.sig);
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        acc
    }

    /// The section at vertex `position` (1-based) of `level`.
    pub fn section(&self, level: usize, position: usize) -> Result<Self> {
        let invalid = Error::InvalidVertex { level, position };
        if level >= self.depth() || position == 0 || position > self.sig.level_size(level) {
            return Err(invalid);
        }
        let sub = self.sig.subtree(level).ok_or(invalid)?;
        Ok(self.section_unchecked(level, position - 1, sub))
    }

    fn section_unchecked(&self, level: usize, index: usize, sub: &WreathSignature) -> Self {
        let mut labels = Vec::with_capacity(sub.label_count());
        for m in 0..sub.depth() {
            let width = sub.level_size(m);
            let start = self.sig.offset(level + m) + index * width;
            labels.extend_from_slice(&self.labels[start..start + width]);
        }
        Self::from_flat_unchecked(sub, labels)
    }

    /// The `p_1` sections at the children of the root, left to right.
    /// Empty for depth-1 elements.
    pub fn sections(&self) -> Vec<Self> {
        match self.sig.tail() {
            Some(tail) => (0..self.sig.arity(0) as usize)
                .map(|i| self.section_unchecked(1, i, tail))
                .collect(),
            None => Vec::new(),
        }
    }

    pub fn index_vector(&self) -> LevelIndexVector {
        LevelIndexVector {
            counts: self
                .levels()
                .map(|row| row.iter().filter(|&&a| a != 0).count())
                .collect(),
        }
    }

    /// The induced permutation of the leaves, ordered lexicographically.
    pub fn leaf_permutation(&self) -> LeafPermutation {
        let sig = &self.sig;
        let mut image = vec![0usize];
        for level in 0..sig.depth() {
            let p = sig.arity(level);
            let offset = sig.offset(level);
            image = next_level_image(&image, &self.labels[offset..offset + image.len()], p);
        }
        LeafPermutation::from_images_unchecked(image)
    }

    /// Uniform element of the full wreath product, deterministic per seed.
    pub fn random(sig: &WreathSignature, seed: u64) -> Self {
        Self::random_with(sig, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn random_with<R: Rng + ?Sized>(sig: &WreathSignature, rng: &mut R) -> Self {
        let mut labels = Vec::with_capacity(sig.label_count());
        for level in 0..sig.depth() {
            let p = sig.arity(level);
            labels.extend((0..sig.level_size(level)).map(|_| rng.gen_range(0..p)));
        }
        Self::from_flat_unchecked(sig, labels)
    }

    /// Every element of the full wreath product, in lexicographic label order.
    pub fn all(sig: &WreathSignature) -> AllElements {
        AllElements {
            sig: sig.clone(),
            moduli: (0..sig.depth())
                .flat_map(|l| std::iter::repeat_n(sig.arity(l), sig.level_size(l)))
                .collect(),
            next: Some(vec![0; sig.label_count()]),
        }
    }
}

/// Positions of the children's images on the next level, given the images
/// of the current level's vertices and their labels.
fn next_level_image(image: &[usize], labels: &[u32], p: u32) -> Vec<usize> {
    let pu = p as usize;
    let mut next = vec![0usize; image.len() * pu];
    for (j, (&img, &a)) in image.iter().zip(labels).enumerate() {
        let a = a as usize;
        for x in 0..pu {
            next[j * pu + x] = img * pu + (x + a) % pu;
        }
    }
    next
}

fn check_level(
    sig: &WreathSignature,
    level: usize,
    row: &[u32],
) -> std::result::Result<(), String> {
    let expected = sig.level_size(level);
    if row.len() != expected {
        return Err(format!(
            "level {level} has {} labels, expected {expected}",
            row.len()
        ));
    }
    let p = sig.arity(level);
    if let Some(a) = row.iter().find(|&&a| a >= p) {
        return Err(format!("label {a} on level {level} is not below arity {p}"));
    }
    Ok(())
}

/// Iterator returned by [`TreeAutomorphism::all`].
pub struct AllElements {
    sig: WreathSignature,
    moduli: Vec<u32>,
    next: Option<Vec<u32>>,
}

impl Iterator for AllElements {
    type Item = TreeAutomorphism;

    fn next(&mut self) -> Option<TreeAutomorphism> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut carry = true;
        for (a, &p) in succ.iter_mut().zip(&self.moduli).rev() {
            *a += 1;
            if *a < p {
                carry = false;
                break;
            }
            *a = 0;
        }
        if !carry {
            self.next = Some(succ);
        }
        Some(TreeAutomorphism::from_flat_unchecked(&self.sig, current))
    }
}

impl Mul for &TreeAutomorphism {
    type Output = TreeAutomorphism;

    /// Panics on signature mismatch; use [`TreeAutomorphism::multiply`] for a
    /// fallible product.
    fn mul(self, rhs: &TreeAutomorphism) -> TreeAutomorphism {
        assert!(
            self.sig == rhs.sig,
            "signature mismatch: {} vs {}",
            self.sig,
            rhs.sig
        );
        self.mul_unchecked(rhs)
    }
}

impl PartialEq for TreeAutomorphism {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.sig == other.sig
    }
}

impl Eq for TreeAutomorphism {}

impl Hash for TreeAutomorphism {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.labels.hash(state);
    }
}

/// Lexicographic on labels (after arities); coincides with the order of
/// rendered strings when every arity is at most 9.
impl Ord for TreeAutomorphism {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sig
            .arities()
            .cmp(other.sig.arities())
            .then_with(|| self.labels.cmp(&other.labels))
    }
}

impl PartialOrd for TreeAutomorphism {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TreeAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for TreeAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.render(), self.sig)
    }
}
