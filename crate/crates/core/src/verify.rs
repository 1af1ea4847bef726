//! Named verification suites and their JSON reports.
//!
//! Each suite compares the closed forms, recursive criteria and constructive
//! decompositions against the brute-force [`Oracle`] on one signature, and
//! optionally samples deeper trees of the same shape.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::commutator::{decompose_bk_with_gk_witness, decompose_derived_wreath, decompose_gk};
use crate::error::{Error, Result};
use crate::membership::{
    in_derived_bk, in_derived_gk, in_derived_gk_by_index, in_derived_wreath, in_gk,
    random_member_with, subgroup_order_with_cap, SubgroupKind, SubgroupSpec,
};
use crate::oracle::{ElementSet, Oracle};
use crate::portrait::TreeAutomorphism;
use crate::signature::WreathSignature;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Orders,
    Membership,
    Cw,
    Squares,
    Center,
    Decompose,
    Homomorphism,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Orders,
        Suite::Membership,
        Suite::Cw,
        Suite::Squares,
        Suite::Center,
        Suite::Decompose,
        Suite::Homomorphism,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Orders => "orders",
            Suite::Membership => "membership",
            Suite::Cw => "cw",
            Suite::Squares => "squares",
            Suite::Center => "center",
            Suite::Decompose => "decompose",
            Suite::Homomorphism => "homomorphism",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Unsupported(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub expected: Value,
    pub actual: Value,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub suite: String,
    pub signature: Vec<u32>,
    pub checks: Vec<Check>,
    pub elapsed_ms: u64,
    /// Desk-scale bounds the suite ran under.
    pub bounds: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Random samples per sampled check and depth.
    pub samples: usize,
    /// Sampled checks also run on deeper trees, extending the signature by
    /// repeating its last arity up to this depth.
    pub max_depth: Option<usize>,
    pub oracle: Oracle,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 0,
            samples: 1000,
            max_depth: None,
            oracle: Oracle::default(),
        }
    }
}

struct Builder {
    checks: Vec<Check>,
    notes: Vec<String>,
}

impl Builder {
    fn check(
        &mut self,
        name: impl Into<String>,
        expected: impl Into<Value>,
        actual: impl Into<Value>,
    ) {
        let (expected, actual) = (expected.into(), actual.into());
        let pass = expected == actual;
        self.checks.push(Check {
            name: name.into(),
            expected,
            actual,
            pass,
        });
    }
}

/// Signatures for sampled checks: `sig` itself, then `sig` extended by its
/// last arity up to `max_depth`.
fn sample_signatures(
    sig: &WreathSignature,
    max_depth: Option<usize>,
) -> Result<Vec<WreathSignature>> {
    let mut out = vec![sig.clone()];
    let last = *sig.arities().last().expect("nonempty");
    for depth in sig.depth() + 1..=max_depth.unwrap_or(0) {
        let mut arities = sig.arities().to_vec();
        arities.resize(depth, last);
        out.push(WreathSignature::new(arities)?);
    }
    Ok(out)
}

fn within_cap(sig: &WreathSignature, oracle: &Oracle) -> bool {
    sig.group_order() <= num_bigint::BigUint::from(oracle.enumeration_cap)
}

fn spec(kind: SubgroupKind, sig: &WreathSignature) -> Result<SubgroupSpec> {
    SubgroupSpec::new(kind, sig.clone())
}

pub fn run_suite(suite: Suite, sig: &WreathSignature, opts: &SuiteOptions) -> Result<Report> {
    let start = Instant::now();
    let mut b = Builder {
        checks: Vec::new(),
        notes: Vec::new(),
    };
    let depths = sample_signatures(sig, opts.max_depth)?;
    let depth_range = format!(
        "{}..={}",
        sig.depth(),
        depths.last().expect("nonempty").depth()
    );
    let bounds = match suite {
        Suite::Orders | Suite::Membership | Suite::Center => format!(
            "exhaustive at depth {}; enumeration cap {}",
            sig.depth(),
            opts.oracle.enumeration_cap
        ),
        Suite::Cw => format!(
            "exhaustive at depth {}; pairwise scans on groups of at most {} elements",
            sig.depth(),
            opts.oracle.quadratic_cap
        ),
        Suite::Squares | Suite::Decompose | Suite::Homomorphism => format!(
            "exhaustive at depth {} when within caps (enumeration {}, pairwise {}); {} samples per check at depths {}",
            sig.depth(),
            opts.oracle.enumeration_cap,
            opts.oracle.quadratic_cap,
            opts.samples,
            depth_range
        ),
    };
    match suite {
        Suite::Orders => orders(&mut b, sig, opts)?,
        Suite::Membership => membership(&mut b, sig, opts)?,
        Suite::Cw => cw(&mut b, sig, opts)?,
        Suite::Squares => squares(&mut b, sig, &depths, opts)?,
        Suite::Center => center(&mut b, sig, opts)?,
        Suite::Decompose => decompose(&mut b, sig, &depths, opts)?,
        Suite::Homomorphism => homomorphism(&mut b, sig, &depths, opts)?,
    }
    Ok(Report {
        suite: suite.name().to_string(),
        signature: sig.arities().to_vec(),
        checks: b.checks,
        elapsed_ms: start.elapsed().as_millis() as u64,
        bounds,
        notes: b.notes,
    })
}

fn orders(b: &mut Builder, sig: &WreathSignature, opts: &SuiteOptions) -> Result<()> {
    let o = &opts.oracle;
    let mut kinds = vec![SubgroupKind::Full, SubgroupKind::Derived];
    if sig.is_binary() {
        kinds.push(SubgroupKind::SylowA);
        if sig.depth() >= 2 {
            kinds.push(SubgroupKind::SylowADerived);
        }
    }
    let mut sizes = Vec::new();
    for kind in kinds {
        let s = spec(kind, sig)?;
        let formula = subgroup_order_with_cap(&s, o.enumeration_cap)?;
        let count = o.enumerate(&s)?.len();
        b.check(
            format!("|{kind}| enumerated vs closed form"),
            formula.to_string(),
            count.to_string(),
        );
        sizes.push(count);
    }
    if sig.is_binary() {
        b.check("index |B_k : G_k|", json!(2), json!(sizes[0] / sizes[2]));
    }
    Ok(())
}

fn membership(b: &mut Builder, sig: &WreathSignature, opts: &SuiteOptions) -> Result<()> {
    let o = &opts.oracle;
    let full = o.enumerate(&spec(SubgroupKind::Full, sig)?)?;
    let derived = o.derived_closure(&full)?;
    let mut wreath_mismatch = 0usize;
    for g in full.iter() {
        wreath_mismatch += usize::from(in_derived_wreath(g) != derived.contains(g));
    }
    b.check(
        "in_derived_wreath vs derived closure (mismatches)",
        0,
        wreath_mismatch,
    );
    if !sig.is_binary() {
        return Ok(());
    }
    let even = o.enumerate(&spec(SubgroupKind::SylowA, sig)?)?;
    let even_derived = if sig.depth() >= 2 {
        Some(o.derived_closure(&even)?)
    } else {
        None
    };
    let (mut bk, mut gk, mut gk_d, mut gk_i) = (0usize, 0usize, 0usize, 0usize);
    for g in full.iter() {
        bk += usize::from(in_derived_bk(g)? != derived.contains(g));
        gk += usize::from(in_gk(g)? != even.contains(g));
        if let Some(d) = &even_derived {
            gk_d += usize::from(in_derived_gk(g)? != d.contains(g));
            gk_i += usize::from(in_derived_gk_by_index(g)? != d.contains(g));
        }
    }
    b.check(
        "in_derived_Bk vs derived closure of B_k (mismatches)",
        0,
        bk,
    );
    b.check("in_Gk vs even leaf permutations (mismatches)", 0, gk);
    if even_derived.is_some() {
        b.check(
            "in_derived_Gk vs derived closure of G_k (mismatches)",
            0,
            gk_d,
        );
        b.check(
            "in_derived_Gk_by_index vs derived closure of G_k (mismatches)",
            0,
            gk_i,
        );
    }
    Ok(())
}

fn expected_full_width(sig: &WreathSignature) -> usize {
    usize::from(sig.depth() >= 2)
}

fn cw(b: &mut Builder, sig: &WreathSignature, opts: &SuiteOptions) -> Result<()> {
    let o = &opts.oracle;
    let full = o.enumerate(&spec(SubgroupKind::Full, sig)?)?;
    width_checks(b, o, "full", &full, expected_full_width(sig))?;
    if sig.is_binary() {
        let even = o.enumerate(&spec(SubgroupKind::SylowA, sig)?)?;
        // G_1 trivial, G_2 = K_4 abelian
        width_checks(b, o, "sylow-a", &even, usize::from(sig.depth() >= 3))?;
        let mixed = o.commutator_set_between(&full, &even)?;
        let derived = o.derived_closure(&full)?;
        b.check(
            "{[f,l] : f in B_k, l in G_k} = B_k'",
            true,
            mixed == derived,
        );
    }
    Ok(())
}

fn width_checks(
    b: &mut Builder,
    o: &Oracle,
    label: &str,
    set: &ElementSet,
    expected: usize,
) -> Result<()> {
    let commutators = o.commutator_set(set)?;
    let derived = o.derived_closure(set)?;
    b.check(
        format!("commutator_set({label}) = derived_closure({label})"),
        true,
        commutators == derived,
    );
    b.check(
        format!("commutator_width({label})"),
        expected,
        o.commutator_width(set)?,
    );
    Ok(())
}

fn squares(
    b: &mut Builder,
    sig: &WreathSignature,
    depths: &[WreathSignature],
    opts: &SuiteOptions,
) -> Result<()> {
    sig.ensure_binary()?;
    let o = &opts.oracle;
    let sq_in_bk = |g: &TreeAutomorphism| in_derived_bk(&g.pow(2));
    let sq_in_gk = |g: &TreeAutomorphism| in_derived_gk(&g.pow(2));
    if within_cap(sig, o) {
        let full = o.enumerate(&spec(SubgroupKind::Full, sig)?)?;
        let mut bad = 0usize;
        for g in full.iter() {
            bad += usize::from(!sq_in_bk(g)?);
        }
        b.check(
            format!("g^2 in B_k' for all g in B_{} (violations)", sig.depth()),
            0,
            bad,
        );
        if sig.depth() >= 2 {
            let even = o.enumerate(&spec(SubgroupKind::SylowA, sig)?)?;
            let mut bad = 0usize;
            for g in even.iter() {
                bad += usize::from(!sq_in_gk(g)?);
            }
            b.check(
                format!("g^2 in G_k' for all g in G_{} (violations)", sig.depth()),
                0,
                bad,
            );
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for s in depths {
        let full = spec(SubgroupKind::Full, s)?;
        let mut bad = 0usize;
        for _ in 0..opts.samples {
            bad += usize::from(!sq_in_bk(&random_member_with(&full, &mut rng))?);
        }
        b.check(
            format!(
                "g^2 in B_k' at depth {} ({} samples, violations)",
                s.depth(),
                opts.samples
            ),
            0,
            bad,
        );
        if s.depth() >= 2 {
            let even = spec(SubgroupKind::SylowA, s)?;
            let mut bad = 0usize;
            for _ in 0..opts.samples {
                bad += usize::from(!sq_in_gk(&random_member_with(&even, &mut rng))?);
            }
            b.check(
                format!(
                    "g^2 in G_k' at depth {} ({} samples, violations)",
                    s.depth(),
                    opts.samples
                ),
                0,
                bad,
            );
        }
    }
    Ok(())
}

fn center(b: &mut Builder, sig: &WreathSignature, opts: &SuiteOptions) -> Result<()> {
    let o = &opts.oracle;
    let full = o.enumerate(&spec(SubgroupKind::Full, sig)?)?;
    let z = o.center(&full)?;
    // the center is the diagonal copy of the bottom cyclic group
    let bottom = *sig.arities().last().expect("nonempty");
    b.check("|center(full)|", bottom, z.len());
    b.check(
        "centralizer(full, full) = center(full)",
        true,
        o.centralizer(&full, &full)? == z,
    );
    if sig.is_binary() {
        let even = o.enumerate(&spec(SubgroupKind::SylowA, sig)?)?;
        let expected = match sig.depth() {
            1 => 1,
            2 => 4,
            _ => 2,
        };
        let zg = o.center(&even)?;
        b.check("|center(sylow-a)|", expected, zg.len());
        b.check(
            "centralizer(sylow-a, sylow-a) = center(sylow-a)",
            true,
            o.centralizer(&even, &even)? == zg,
        );
    }
    b.notes.push(
        "centralizer isomorphism types inside Sylow subgroups of S_n and A_n for composite n are not checked; only center orders are"
            .into(),
    );
    Ok(())
}

fn decompose(
    b: &mut Builder,
    sig: &WreathSignature,
    depths: &[WreathSignature],
    opts: &SuiteOptions,
) -> Result<()> {
    let o = &opts.oracle;
    let failures = |ws: &mut dyn Iterator<Item = TreeAutomorphism>,
                    f: fn(&TreeAutomorphism) -> Result<crate::CommutatorWitness>|
     -> (usize, usize) {
        let (mut n, mut bad) = (0, 0);
        for w in ws {
            n += 1;
            bad += usize::from(f(&w).and_then(|wit| wit.verify()).is_err());
        }
        (n, bad)
    };
    if within_cap(sig, o) {
        let derived = o.enumerate(&spec(SubgroupKind::Derived, sig)?)?;
        let (n, bad) = failures(&mut derived.iter().cloned(), decompose_derived_wreath);
        b.check(
            format!("decompose_derived_wreath over all {n} elements of W' (failures)"),
            0,
            bad,
        );
        if sig.is_binary() {
            let (n, bad) = failures(&mut derived.iter().cloned(), decompose_bk_with_gk_witness);
            b.check(
                format!("decompose_Bk_with_Gk_witness over all {n} elements of B_k' (failures)"),
                0,
                bad,
            );
            if sig.depth() >= 2 {
                let gd = o.enumerate(&spec(SubgroupKind::SylowADerived, sig)?)?;
                let (n, bad) = failures(&mut gd.iter().cloned(), decompose_gk);
                b.check(
                    format!("decompose_Gk over all {n} elements of G_k' (failures)"),
                    0,
                    bad,
                );
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for s in depths {
        let derived = spec(SubgroupKind::Derived, s)?;
        let mut draws = (0..opts.samples)
            .map(|_| random_member_with(&derived, &mut rng))
            .collect::<Vec<_>>()
            .into_iter();
        let f = if s.is_binary() {
            decompose_bk_with_gk_witness
        } else {
            decompose_derived_wreath
        };
        let (n, bad) = failures(&mut draws, f);
        b.check(
            format!("sampled W' at depth {} ({n} samples, failures)", s.depth()),
            0,
            bad,
        );
        if s.is_binary() && s.depth() >= 2 {
            let gd = spec(SubgroupKind::SylowADerived, s)?;
            let mut draws = (0..opts.samples)
                .map(|_| random_member_with(&gd, &mut rng))
                .collect::<Vec<_>>()
                .into_iter();
            let (n, bad) = failures(&mut draws, decompose_gk);
            b.check(
                format!(
                    "sampled G_k' at depth {} ({n} samples, failures)",
                    s.depth()
                ),
                0,
                bad,
            );
        }
    }
    Ok(())
}

fn homomorphism(
    b: &mut Builder,
    sig: &WreathSignature,
    depths: &[WreathSignature],
    opts: &SuiteOptions,
) -> Result<()> {
    let o = &opts.oracle;
    let respects = |g: &TreeAutomorphism, h: &TreeAutomorphism| {
        (g * h).leaf_permutation() == g.leaf_permutation().then(&h.leaf_permutation())
    };
    if within_cap(sig, o) && sig.group_order() <= num_bigint::BigUint::from(o.quadratic_cap) {
        let full = o.enumerate(&spec(SubgroupKind::Full, sig)?)?;
        let perms: Vec<_> = full
            .iter()
            .map(TreeAutomorphism::leaf_permutation)
            .collect();
        let mut bad = 0usize;
        for (g, pg) in full.iter().zip(&perms) {
            for (h, ph) in full.iter().zip(&perms) {
                bad += usize::from((g * h).leaf_permutation() != pg.then(ph));
            }
        }
        b.check(
            format!("all {} pairs (mismatches)", full.len() * full.len()),
            0,
            bad,
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for s in depths {
        let mut bad = 0usize;
        for _ in 0..opts.samples {
            let g = TreeAutomorphism::random_with(s, &mut rng);
            let h = TreeAutomorphism::random_with(s, &mut rng);
            bad += usize::from(!respects(&g, &h));
        }
        b.check(
            format!(
                "random pairs at depth {} ({} samples, mismatches)",
                s.depth(),
                opts.samples
            ),
            0,
            bad,
        );
    }
    Ok(())
}
