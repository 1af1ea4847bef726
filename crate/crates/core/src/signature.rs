//! Tree shapes for iterated wreath products.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// The tower of cyclic arities `(p_1, ..., p_k)`.
///
/// `p_1` is the arity of the root, `p_k` the arity of the vertices just above
/// the leaves. The signature fixes the group `C_{p_k} ≀ ... ≀ C_{p_1}` acting on
/// the depth-`k` tree.
///
/// Cloning is cheap; the level layout and the signatures of all subtrees are
/// precomputed and shared.
#[derive(Clone)]
pub struct WreathSignature(Arc<Layout>);

struct Layout {
    arities: Vec<u32>,
    /// Number of vertices on each level `0..=k` (the last entry is the leaf count).
    level_sizes: Vec<usize>,
    /// Offset of each internal level inside a flattened label array.
    offsets: Vec<usize>,
    /// Signature of the subtree hanging below a level-1 vertex.
    tail: Option<WreathSignature>,
}

impl WreathSignature {
    pub fn new(arities: impl Into<Vec<u32>>) -> Result<Self> {
        let arities = arities.into();
        if arities.is_empty() {
            return Err(Error::InvalidSignature("depth must be at least 1".into()));
        }
        if let Some(p) = arities.iter().find(|&&p| p < 2) {
            return Err(Error::InvalidSignature(format!("arity {p} is below 2")));
        }
        let mut level_sizes = Vec::with_capacity(arities.len() + 1);
        let mut offsets = Vec::with_capacity(arities.len());
        let mut size = 1usize;
        let mut offset = 0usize;
        for &p in &arities {
            level_sizes.push(size);
            offsets.push(offset);
            offset = offset
                .checked_add(size)
                .ok_or_else(|| Error::InvalidSignature("tree too large".into()))?;
            size = size
                .checked_mul(p as usize)
                .ok_or_else(|| Error::InvalidSignature("tree too large".into()))?;
        }
        level_sizes.push(size);
        let tail = if arities.len() > 1 {
            Some(WreathSignature::new(arities[1..].to_vec())?)
        } else {
            None
        };
        Ok(WreathSignature(Arc::new(Layout {
            arities,
            level_sizes,
            offsets,
            tail,
        })))
    }

    /// `depth` copies of the same arity.
    pub fn uniform(arity: u32, depth: usize) -> Result<Self> {
        Self::new(vec![arity; depth])
    }

    /// The signature of `B_k`, the Sylow 2-subgroup of `S_{2^k}`.
    pub fn binary(depth: usize) -> Result<Self> {
        Self::uniform(2, depth)
    }

    pub fn arities(&self) -> &[u32] {
        &self.0.arities
    }

    pub fn depth(&self) -> usize {
        self.0.arities.len()
    }

    /// Arity of the vertices on `level` (the modulus of their labels).
    pub fn arity(&self, level: usize) -> u32 {
        self.0.arities[level]
    }

    /// Number of vertices on `level`; `level == depth()` gives the leaf count.
    pub fn level_size(&self, level: usize) -> usize {
        self.0.level_sizes[level]
    }

    pub(crate) fn offset(&self, level: usize) -> usize {
        self.0.offsets[level]
    }

    pub fn leaf_count(&self) -> usize {
        self.0.level_sizes[self.depth()]
    }

    /// Total number of internal vertices, i.e. labels in a portrait.
    pub fn label_count(&self) -> usize {
        self.0.offsets[self.depth() - 1] + self.0.level_sizes[self.depth() - 1]
    }

    pub fn is_binary(&self) -> bool {
        self.0.arities.iter().all(|&p| p == 2)
    }

    /// Signature of the subtree below a level-`level` vertex.
    pub fn subtree(&self, level: usize) -> Option<&WreathSignature> {
        let mut sig = self;
        for _ in 0..level {
            sig = sig.0.tail.as_ref()?;
        }
        Some(sig)
    }

    /// Signature of the subtree below a level-1 vertex.
    pub fn tail(&self) -> Option<&WreathSignature> {
        self.0.tail.as_ref()
    }

    /// Order of the full wreath product: `∏_l p_{l+1}^{|X^l|}`.
    pub fn group_order(&self) -> BigUint {
        let mut order = BigUint::from(1u32);
        for level in 0..self.depth() {
            order *= BigUint::from(self.arity(level)).pow(self.level_size(level) as u32);
        }
        order
    }

    pub(crate) fn ensure_binary(&self) -> Result<()> {
        if self.is_binary() {
            Ok(())
        } else {
            Err(Error::NonBinary(self.to_string()))
        }
    }
}

impl PartialEq for WreathSignature {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.arities == other.0.arities
    }
}

impl Eq for WreathSignature {}

impl Hash for WreathSignature {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.arities.hash(state);
    }
}

impl fmt::Display for WreathSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, p) in self.0.arities.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for WreathSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WreathSignature{self}")
    }
}

impl std::str::FromStr for WreathSignature {
    type Err = Error;

    /// Parses a comma-separated arity list such as `2,2,2`.
    fn from_str(s: &str) -> Result<Self> {
        let arities = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidSignature(format!("bad arity {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(arities)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_sizes_are_products_of_arities() {
        let sig = WreathSignature::new(vec![2, 3, 4]).unwrap();
        assert_eq!(sig.level_size(0), 1);
        assert_eq!(sig.level_size(1), 2);
        assert_eq!(sig.level_size(2), 6);
        assert_eq!(sig.leaf_count(), 24);
        assert_eq!(sig.label_count(), 9);
        assert_eq!(sig.tail().unwrap().arities(), &[3, 4]);
        assert_eq!(sig.subtree(2).unwrap().arities(), &[4]);
        assert!(sig.subtree(3).is_none());
    }

    #[test]
    fn rejects_bad_signatures() {
        assert!(WreathSignature::new(Vec::<u32>::new()).is_err());
        assert!(WreathSignature::new(vec![2, 1]).is_err());
        assert!("2,x".parse::<WreathSignature>().is_err());
    }

    #[test]
    fn group_order_matches_closed_form() {
        // p^((p^k - 1)/(p - 1))
        assert_eq!(
            WreathSignature::binary(3).unwrap().group_order(),
            BigUint::from(128u32)
        );
        assert_eq!(
            WreathSignature::uniform(3, 2).unwrap().group_order(),
            BigUint::from(81u32)
        );
        assert_eq!(
            WreathSignature::uniform(3, 3).unwrap().group_order(),
            BigUint::from(3u32).pow(13)
        );
    }
}
