use serde_json::json;

use crate::arith;
use crate::artin::ArtinAlg;
use crate::artin::ArtinElem;
use crate::error::{invalid, Result};
use crate::gamma::{GammaContext, TameCharData};
use crate::ring::{Ring, RingElem};

/// One twisting character: a residue exponent modulo `q - 1` of prime-to-`l`
/// order times the unipotent unit `1 + Y^shift`, realised at truncation
/// depth `depth`. `unipotent_order == 1` marks a `k`-valued twist.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwistEntry {
    pub depth: usize,
    pub residue_exponent: u64,
    pub unipotent_order: u64,
    pub shift: usize,
}

impl TwistEntry {
    pub fn is_k_valued(&self) -> bool {
        self.unipotent_order == 1
    }

    pub fn label(&self) -> String {
        if self.is_k_valued() {
            format!("k({})", self.residue_exponent)
        } else {
            format!(
                "lift({};1+Y^{};N={})",
                self.residue_exponent, self.shift, self.depth
            )
        }
    }

    /// The unipotent factor in the given algebra.
    pub fn unipotent(&self, r: &ArtinAlg) -> ArtinElem {
        if self.is_k_valued() {
            r.one()
        } else {
            r.one().add(&r.y().pow(self.shift as u64))
        }
    }

    /// The twist as tame data, trivial at the uniformizer.
    pub fn realize(&self, ctx: &GammaContext<ArtinAlg>) -> Result<TameCharData<ArtinElem>> {
        if ctx.ring().depth() != self.depth {
            return invalid(format!(
                "twist {} needs depth {}, context has {}",
                self.label(),
                self.depth,
                ctx.ring().depth()
            ));
        }
        let r = ctx.ring();
        ctx.lift_char(self.residue_exponent as i64, &self.unipotent(r), r.one())
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "label": self.label(),
            "residue_exponent": self.residue_exponent,
            "unipotent_order": self.unipotent_order,
            "unipotent": if self.is_k_valued() { "1".to_string() } else { format!("1+Y^{}", self.shift) },
            "depth": self.depth,
        })
    }
}

/// The twists used to fingerprint supports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistMenu {
    pub q: u64,
    pub ell: u64,
    pub max_depth: usize,
    pub entries: Vec<TwistEntry>,
}

impl TwistMenu {
    /// `k`-valued twists at depth 1, then for each depth `N <= max_depth`
    /// the lifts by `1 + Y^{l^{J-j}}` (order `l^j`, `J = ceil(log_l N)`)
    /// for every `l^j` dividing `q - 1`.
    pub fn new(q: u64, ell: u64, max_depth: usize) -> Result<Self> {
        if max_depth == 0 {
            return invalid("menu depth must be at least 1");
        }
        if q < 2 || !arith::is_prime(ell) {
            return invalid(format!("invalid menu parameters q = {q}, l = {ell}"));
        }
        let n = q - 1;
        let (v, _, _) = arith::split_prime_part(n, ell);
        let residues: Vec<u64> = (0..n)
            .filter(|&e| !(n / arith::gcd(n, e)).is_multiple_of(ell))
            .collect();
        let mut entries: Vec<TwistEntry> = residues
            .iter()
            .map(|&e| TwistEntry {
                depth: 1,
                residue_exponent: e,
                unipotent_order: 1,
                shift: 0,
            })
            .collect();
        for depth in 2..=max_depth {
            let big_j = arith::ceil_log(ell, depth as u64);
            for &e in &residues {
                for j in 1..=big_j.min(v) {
                    entries.push(TwistEntry {
                        depth,
                        residue_exponent: e,
                        unipotent_order: ell.pow(j),
                        shift: ell.pow(big_j - j) as usize,
                    });
                }
            }
        }
        entries.sort_by_key(|t| (t.depth, t.residue_exponent, t.unipotent_order));
        entries.dedup_by_key(|t| (t.residue_exponent, t.unipotent_order, t.depth));
        Ok(TwistMenu {
            q,
            ell,
            max_depth,
            entries,
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Indices of the `k`-valued entries.
    pub fn k_valued(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.entries[i].is_k_valued())
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "q": self.q,
            "ell": self.ell,
            "max_depth": self.max_depth,
            "entries": self.entries.iter().map(TwistEntry::to_json).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn menu_for_q5_l2() {
        let m = TwistMenu::new(5, 2, 4).unwrap();
        let labels: Vec<String> = m.entries.iter().map(TwistEntry::label).collect();
        assert_eq!(
            labels,
            [
                "k(0)",
                "lift(0;1+Y^1;N=2)",
                "lift(0;1+Y^2;N=3)",
                "lift(0;1+Y^1;N=3)",
                "lift(0;1+Y^2;N=4)",
                "lift(0;1+Y^1;N=4)"
            ]
        );
        assert_eq!(m.k_valued(), vec![0]);
    }

    #[test]
    fn lifts_have_the_declared_order() {
        for (q, ell, depth) in [(5u64, 2u64, 4usize), (7, 3, 5), (13, 2, 6), (11, 5, 3)] {
            let m = TwistMenu::new(q, ell, depth).unwrap();
            for t in &m.entries {
                let r = ArtinAlg::new(ell, 1, t.depth).unwrap();
                assert_eq!(t.unipotent(&r).unit_order().unwrap(), t.unipotent_order);
                assert_eq!((q - 1) % t.unipotent_order, 0);
            }
        }
        // q - 1 prime to l: only k-valued twists.
        let m = TwistMenu::new(5, 3, 4).unwrap();
        assert_eq!(m.len(), 4);
        assert!(m.entries.iter().all(TwistEntry::is_k_valued));
    }
}
