use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// A finitely generated abelian group `ℤ^r ⊕ ℤ/d₁ ⊕ … ⊕ ℤ/d_k` with
/// `d₁ | d₂ | … | d_k` and every `dᵢ ≥ 2`. The representation is unique per
/// isomorphism class, so derived equality is group isomorphism.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct FinAbGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl FinAbGroup {
    pub fn zero() -> Self {
        FinAbGroup::default()
    }

    pub fn free(rank: usize) -> Self {
        FinAbGroup { free_rank: rank, torsion: Vec::new() }
    }

    /// Builds the group `ℤ^free ⊕ ⊕ ℤ/dᵢ` from arbitrary cyclic orders,
    /// normalizing to invariant factors. Orders of absolute value 1 are dropped.
    pub fn from_cyclic(free_rank: usize, orders: impl IntoIterator<Item = BigInt>) -> Self {
        // p-primary decomposition would be overkill here: repeatedly merging
        // by gcd/lcm converges to the invariant-factor chain.
        let mut factors: Vec<BigInt> =
            orders.into_iter().map(|d| d.abs()).filter(|d| !d.is_one() && !d.is_zero()).collect();
        loop {
            factors.sort();
            let mut changed = false;
            for i in 0..factors.len() {
                for j in i + 1..factors.len() {
                    let (a, b) = (&factors[i], &factors[j]);
                    if !(b % a).is_zero() {
                        let g = a.gcd(b);
                        let l = a.lcm(b);
                        factors[i] = g;
                        factors[j] = l;
                        changed = true;
                    }
                }
            }
            factors.retain(|d| !d.is_one());
            if !changed {
                break;
            }
        }
        FinAbGroup { free_rank, torsion: factors }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn direct_sum(&self, other: &FinAbGroup) -> FinAbGroup {
        FinAbGroup::from_cyclic(
            self.free_rank + other.free_rank,
            self.torsion.iter().chain(&other.torsion).cloned(),
        )
    }

    /// `dim_{𝔽_p}(G ⊗ 𝔽_p)`.
    pub fn dim_mod_p(&self, p: u64) -> usize {
        let p = BigInt::from(p);
        self.free_rank + self.torsion.iter().filter(|d| (*d % &p).is_zero()).count()
    }
}

impl fmt::Display for FinAbGroup {
    /// `Z^r ⊕ Z/d1 ⊕ …`, or `0` for the trivial group.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

impl fmt::Debug for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinAbGroup({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(free: usize, t: &[i64]) -> FinAbGroup {
        FinAbGroup::from_cyclic(free, t.iter().map(|&d| BigInt::from(d)))
    }

    #[test]
    fn normalizes_to_invariant_factors() {
        assert_eq!(g(0, &[2, 3]).torsion, vec![BigInt::from(6)]);
        assert_eq!(g(0, &[4, 6]).torsion, vec![BigInt::from(2), BigInt::from(12)]);
        assert_eq!(g(1, &[1, -1]), FinAbGroup::free(1));
    }

    #[test]
    fn display() {
        assert_eq!(g(0, &[]).to_string(), "0");
        assert_eq!(g(1, &[]).to_string(), "Z^1");
        assert_eq!(g(2, &[2, 4]).to_string(), "Z^2 ⊕ Z/2 ⊕ Z/4");
    }

    #[test]
    fn reduction_dimension() {
        let grp = g(1, &[2, 6]);
        assert_eq!(grp.dim_mod_p(2), 3);
        assert_eq!(grp.dim_mod_p(3), 2);
        assert_eq!(grp.dim_mod_p(5), 1);
    }
}
