use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::monomial::{Monomial, MAX_VARS};

/// Monomial orders, all with `x0 > x1 > ... > xn`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MonomialOrder {
    #[default]
    Grevlex,
    Lex,
    /// Graded reverse lexicographic on the first `k` variables, ties broken by
    /// graded reverse lexicographic on the rest; the first block is eliminated.
    Elimination(usize),
}

fn grevlex_range(a: &[u8; MAX_VARS], b: &[u8; MAX_VARS], lo: usize, hi: usize) -> Ordering {
    let da: u32 = a[lo..hi].iter().map(|&e| e as u32).sum();
    let db: u32 = b[lo..hi].iter().map(|&e| e as u32).sum();
    if da != db {
        return da.cmp(&db);
    }
    for i in (lo..hi).rev() {
        if a[i] != b[i] {
            // smaller power of the last differing variable is larger
            return b[i].cmp(&a[i]);
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match *self {
            MonomialOrder::Grevlex => {
                if a.degree() != b.degree() {
                    return a.degree().cmp(&b.degree());
                }
                let (ra, rb) = (a.raw(), b.raw());
                for i in (0..MAX_VARS).rev() {
                    if ra[i] != rb[i] {
                        return rb[i].cmp(&ra[i]);
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::Lex => a.raw().cmp(b.raw()),
            MonomialOrder::Elimination(k) => grevlex_range(a.raw(), b.raw(), 0, k)
                .then_with(|| grevlex_range(a.raw(), b.raw(), k, MAX_VARS)),
        }
    }

    /// Degree used to schedule critical pairs: the eliminated block carries weight zero.
    pub fn sugar_degree(&self, m: &Monomial) -> u32 {
        match *self {
            MonomialOrder::Elimination(k) => m.degree() - (0..k).map(|i| m.exp(i)).sum::<u32>(),
            _ => m.degree(),
        }
    }
}
