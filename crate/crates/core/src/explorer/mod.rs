//! Enumeration of level-zero inertial classes for `GL_2`, fingerprints by
//! twisted gamma factors and the resulting block partitions.

mod counterexample;
mod menu;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde_json::json;

use crate::arith;
use crate::artin::ArtinAlg;
use crate::error::{invalid, Error, Result};
use crate::gamma::{CompareMode, GammaContext, GammaFactor, InertialSupport};

pub use counterexample::{run_counterexample, ChainCheck, CounterexampleReport, TwistRow};
pub use menu::{TwistEntry, TwistMenu};

/// Version of the JSON report layout.
pub const REPORT_SCHEMA: u32 = 1;

/// All level-zero inertial classes in canonical order.
pub fn enumerate_supports(q: u64, ell: u64) -> Result<Vec<InertialSupport>> {
    let (p, _) = arith::prime_power(q)
        .ok_or_else(|| Error::InvalidArgument(format!("{q} is not a prime power")))?;
    if !arith::is_prime(ell) {
        return invalid(format!("{ell} is not prime"));
    }
    if ell == p {
        return invalid(format!("l = {ell} equals the residue characteristic"));
    }
    if q > 1 << 10 {
        return Err(Error::Size(format!("q = {q} exceeds 1024")));
    }
    let mut out: Vec<InertialSupport> = (0..q * q - 1)
        .filter_map(|e| InertialSupport::cuspidal(q, e).ok())
        .collect();
    out.sort();
    out.dedup();
    for a in 0..q - 1 {
        for b in a..q - 1 {
            out.push(InertialSupport::principal(q, a, b));
        }
        out.push(InertialSupport::special(q, a));
    }
    out.sort();
    Ok(out)
}

/// Twisted gamma factors of one support, one per menu entry.
#[derive(Clone, Debug)]
pub struct Fingerprint {
    pub support: InertialSupport,
    pub values: Vec<GammaFactor<ArtinAlg>>,
}

/// One modular context per truncation depth `1..=max_depth`.
#[derive(Clone, Debug)]
pub struct DepthContexts {
    contexts: Vec<GammaContext<ArtinAlg>>,
}

impl DepthContexts {
    pub fn new(q: u64, ell: u64, max_depth: usize, seed: u64, mode: CompareMode) -> Result<Self> {
        let contexts = (1..=max_depth)
            .map(|n| GammaContext::modular(q, ell, n, seed, mode))
            .collect::<Result<_>>()?;
        Ok(DepthContexts { contexts })
    }

    pub fn at(&self, depth: usize) -> Result<&GammaContext<ArtinAlg>> {
        depth
            .checked_sub(1)
            .and_then(|i| self.contexts.get(i))
            .ok_or_else(|| Error::InvalidArgument(format!("no context of depth {depth}")))
    }

    pub fn mode(&self) -> CompareMode {
        self.contexts[0].mode()
    }
}

pub fn fingerprint(
    support: &InertialSupport,
    menu: &TwistMenu,
    contexts: &DepthContexts,
) -> Result<Fingerprint> {
    let values = menu
        .entries
        .iter()
        .map(|t| {
            let ctx = contexts.at(t.depth)?;
            ctx.gamma_support(support, &t.realize(ctx)?)
        })
        .collect::<Result<_>>()?;
    Ok(Fingerprint {
        support: *support,
        values,
    })
}

/// A pair of supports in one naive block but different refined blocks,
/// with the first menu entry telling them apart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub first: usize,
    pub second: usize,
    pub witness: usize,
}

/// Supports partitioned by `k`-valued fingerprints and by full fingerprints.
#[derive(Clone, Debug)]
pub struct BlockReport {
    pub q: u64,
    pub ell: u64,
    pub seed: u64,
    pub mode: CompareMode,
    pub menu: TwistMenu,
    pub supports: Vec<InertialSupport>,
    pub fingerprints: Vec<Fingerprint>,
    /// Classes as sorted indices into `supports`, sorted by least member.
    pub naive_blocks: Vec<Vec<usize>>,
    pub refined_blocks: Vec<Vec<usize>>,
    pub verdicts: Vec<Verdict>,
    pub context_info: Vec<serde_json::Value>,
}

fn entries_equal(
    a: &Fingerprint,
    b: &Fingerprint,
    idx: &[usize],
    contexts: &DepthContexts,
    menu: &TwistMenu,
) -> Result<Option<usize>> {
    for &i in idx {
        let ctx = contexts.at(menu.entries[i].depth)?;
        if !ctx.gamma_eq(&a.values[i], &b.values[i])? {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// Groups fingerprints into classes of entrywise equality on `idx`.
fn classes(
    fps: &[Fingerprint],
    idx: &[usize],
    contexts: &DepthContexts,
    menu: &TwistMenu,
) -> Result<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    'next: for (i, fp) in fps.iter().enumerate() {
        for class in out.iter_mut() {
            if entries_equal(&fps[class[0]], fp, idx, contexts, menu)?.is_none() {
                class.push(i);
                continue 'next;
            }
        }
        out.push(vec![i]);
    }
    Ok(out)
}

/// Partitions fingerprints; verdicts compare the least members of refined
/// classes sharing a naive class.
pub fn partition_blocks(
    fingerprints: Vec<Fingerprint>,
    menu: &TwistMenu,
    contexts: &DepthContexts,
    seed: u64,
) -> Result<BlockReport> {
    if fingerprints.iter().any(|f| f.values.len() != menu.len()) {
        return invalid("fingerprint length does not match the menu");
    }
    let naive = classes(&fingerprints, &menu.k_valued(), contexts, menu)?;
    let all: Vec<usize> = (0..menu.len()).collect();
    let refined = classes(&fingerprints, &all, contexts, menu)?;
    let mut naive_of = vec![0; fingerprints.len()];
    for (c, class) in naive.iter().enumerate() {
        for &i in class {
            naive_of[i] = c;
        }
    }
    for class in &refined {
        if class.iter().any(|&i| naive_of[i] != naive_of[class[0]]) {
            return Err(Error::ConstructionFailure(
                "refined blocks do not refine the naive blocks".into(),
            ));
        }
    }
    let mut verdicts = Vec::new();
    for (a, ca) in refined.iter().enumerate() {
        for cb in &refined[a + 1..] {
            let (x, y) = (ca[0], cb[0]);
            if naive_of[x] == naive_of[y] {
                let witness =
                    entries_equal(&fingerprints[x], &fingerprints[y], &all, contexts, menu)?
                        .ok_or_else(|| {
                            Error::ConstructionFailure("refined classes not separated".into())
                        })?;
                verdicts.push(Verdict {
                    first: x,
                    second: y,
                    witness,
                });
            }
        }
    }
    let supports = fingerprints.iter().map(|f| f.support).collect();
    let context_info = (1..=menu.max_depth)
        .map(|n| contexts.at(n).map(|c| c.info().clone()))
        .collect::<Result<_>>()?;
    Ok(BlockReport {
        q: menu.q,
        ell: menu.ell,
        seed,
        mode: contexts.mode(),
        menu: menu.clone(),
        supports,
        fingerprints,
        naive_blocks: naive,
        refined_blocks: refined,
        verdicts,
        context_info,
    })
}

/// Parameters of a block computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlocksConfig {
    pub q: u64,
    pub ell: u64,
    pub depth: usize,
    pub mode: CompareMode,
    pub seed: u64,
}

impl Default for BlocksConfig {
    fn default() -> Self {
        BlocksConfig {
            q: 5,
            ell: 2,
            depth: 4,
            mode: CompareMode::UpToMonomial,
            seed: 0,
        }
    }
}

/// Enumerates, fingerprints (in parallel) and partitions.
pub fn run_blocks(cfg: &BlocksConfig) -> Result<BlockReport> {
    let supports = enumerate_supports(cfg.q, cfg.ell)?;
    let menu = TwistMenu::new(cfg.q, cfg.ell, cfg.depth)?;
    let contexts = DepthContexts::new(cfg.q, cfg.ell, cfg.depth, cfg.seed, cfg.mode)?;
    let fps = supports
        .par_iter()
        .map(|s| fingerprint(s, &menu, &contexts))
        .collect::<Result<Vec<_>>>()?;
    partition_blocks(fps, &menu, &contexts, cfg.seed)
}

impl BlockReport {
    fn labels(&self, class: &[usize]) -> Vec<String> {
        class.iter().map(|&i| self.supports[i].label()).collect()
    }

    /// Sorted class sizes.
    pub fn size_multiset(blocks: &[Vec<usize>]) -> Vec<usize> {
        let mut sizes: Vec<usize> = blocks.iter().map(Vec::len).collect();
        sizes.sort_unstable();
        sizes
    }

    /// Index of the refined block holding a support.
    pub fn refined_block_of(&self, support: &InertialSupport) -> Option<usize> {
        let i = self.supports.iter().position(|s| s == support)?;
        self.refined_blocks.iter().position(|c| c.contains(&i))
    }

    pub fn naive_block_of(&self, support: &InertialSupport) -> Option<usize> {
        let i = self.supports.iter().position(|s| s == support)?;
        self.naive_blocks.iter().position(|c| c.contains(&i))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let blocks = |b: &[Vec<usize>]| b.iter().map(|c| self.labels(c)).collect::<Vec<_>>();
        json!({
            "schema": REPORT_SCHEMA,
            "convention": {
                "gamma": GammaContext::<ArtinAlg>::conventions(),
                "compare_mode": self.mode.as_str(),
                "seed": self.seed,
                "contexts": self.context_info,
            },
            "q": self.q,
            "ell": self.ell,
            "menu": self.menu.to_json(),
            "supports": self.supports.iter().map(|s| s.to_json(self.q)).collect::<Vec<_>>(),
            "naive_blocks": blocks(&self.naive_blocks),
            "refined_blocks": blocks(&self.refined_blocks),
            "naive_sizes": Self::size_multiset(&self.naive_blocks),
            "refined_sizes": Self::size_multiset(&self.refined_blocks),
            "verdicts": self.verdicts.iter().map(|v| json!({
                "first": self.supports[v.first].label(),
                "second": self.supports[v.second].label(),
                "witness": self.menu.entries[v.witness].label(),
            })).collect::<Vec<_>>(),
        })
    }

    /// One row per (support, twist) with the gamma factor as compact JSON.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("support,twist,depth,gamma\n");
        for fp in &self.fingerprints {
            for (t, g) in self.menu.entries.iter().zip(&fp.values) {
                let gamma = g.to_json().to_string().replace('"', "\"\"");
                let _ = writeln!(
                    out,
                    "\"{}\",\"{}\",{},\"{}\"",
                    fp.support.label(),
                    t.label(),
                    t.depth,
                    gamma
                );
            }
        }
        out
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "q = {}, l = {}, depth = {}, mode = {}, seed = {}",
            self.q, self.ell, self.menu.max_depth, self.mode, self.seed
        );
        let _ = writeln!(
            out,
            "menu: {}",
            self.menu
                .entries
                .iter()
                .map(TwistEntry::label)
                .collect::<Vec<_>>()
                .join(", ")
        );
        let _ = writeln!(out, "supports: {}", self.supports.len());
        for (name, blocks) in [
            ("naive", &self.naive_blocks),
            ("refined", &self.refined_blocks),
        ] {
            let _ = writeln!(out, "{name} blocks ({}):", blocks.len());
            for (i, c) in blocks.iter().enumerate() {
                let _ = writeln!(out, "  [{i}] {}", self.labels(c).join(" "));
            }
        }
        let _ = writeln!(out, "separations ({}):", self.verdicts.len());
        for v in &self.verdicts {
            let _ = writeln!(
                out,
                "  {} | {} by {}",
                self.supports[v.first].label(),
                self.supports[v.second].label(),
                self.menu.entries[v.witness].label()
            );
        }
        out
    }
}

/// Counts of (cuspidal, principal, special) classes.
pub fn support_counts(supports: &[InertialSupport]) -> (usize, usize, usize) {
    let mut by_kind: BTreeMap<&str, usize> = BTreeMap::new();
    for s in supports {
        *by_kind.entry(s.kind()).or_default() += 1;
    }
    let get = |k| by_kind.get(k).copied().unwrap_or(0);
    (get("cuspidal"), get("principal"), get("special"))
}
