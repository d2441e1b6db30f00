//! Rank-2 root data with the positive roots listed in the order used for
//! normal forms. Labels: for SP4 the root α1 is long, for G2 the root α1 is
//! short.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GroupId {
    #[serde(rename = "SL3")]
    Sl3,
    #[serde(rename = "SP4")]
    Sp4,
    #[serde(rename = "G2")]
    G2,
}

impl GroupId {
    pub const ALL: [GroupId; 3] = [GroupId::Sl3, GroupId::Sp4, GroupId::G2];

    pub fn name(&self) -> &'static str {
        match self {
            GroupId::Sl3 => "SL3",
            GroupId::Sp4 => "SP4",
            GroupId::G2 => "G2",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "SL3" => Ok(GroupId::Sl3),
            "SP4" => Ok(GroupId::Sp4),
            "G2" => Ok(GroupId::G2),
            _ => Err(Error::Parse(format!("unknown group {s}"))),
        }
    }

    pub fn datum(&self) -> RootDatum {
        RootDatum::new(*self)
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A root in simple-root coordinates: a*α1 + b*α2.
pub type Root = [i64; 2];
/// A weight in fundamental-weight coordinates.
pub type Weight = [i64; 2];
/// A cocharacter m1*α1^∨ + m2*α2^∨.
pub type Cochar = [i64; 2];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDatum {
    pub group: GroupId,
    pub positive_roots: Vec<Root>,
    /// cartan[i][j] = <α_j, α_i^∨>
    pub cartan: [[i64; 2]; 2],
    /// (α_i, α_i) / 2
    pub half_norms: [i64; 2],
}

impl RootDatum {
    pub fn new(group: GroupId) -> Self {
        match group {
            GroupId::Sl3 => RootDatum {
                group,
                positive_roots: vec![[1, 0], [0, 1], [1, 1]],
                cartan: [[2, -1], [-1, 2]],
                half_norms: [1, 1],
            },
            GroupId::Sp4 => RootDatum {
                group,
                positive_roots: vec![[1, 0], [0, 1], [1, 1], [1, 2]],
                // <α2, α1^∨> = -1, <α1, α2^∨> = -2
                cartan: [[2, -1], [-2, 2]],
                half_norms: [2, 1],
            },
            GroupId::G2 => RootDatum {
                group,
                positive_roots: vec![[1, 0], [0, 1], [1, 1], [2, 1], [3, 1], [3, 2]],
                // <α2, α1^∨> = -3, <α1, α2^∨> = -1
                cartan: [[2, -3], [-1, 2]],
                half_norms: [1, 3],
            },
        }
    }

    pub fn num_positive(&self) -> usize {
        self.positive_roots.len()
    }

    pub fn root(&self, i: usize) -> Root {
        self.positive_roots[i]
    }

    pub fn index_of(&self, r: Root) -> Option<usize> {
        self.positive_roots.iter().position(|&x| x == r)
    }

    pub fn all_roots(&self) -> Vec<Root> {
        let mut v = self.positive_roots.clone();
        v.extend(self.positive_roots.iter().map(|r| [-r[0], -r[1]]));
        v
    }

    pub fn height(r: Root) -> i64 {
        r[0] + r[1]
    }

    /// The root as a weight: (<β, α1^∨>, <β, α2^∨>).
    pub fn root_weight(&self, r: Root) -> Weight {
        [
            r[0] * self.cartan[0][0] + r[1] * self.cartan[0][1],
            r[0] * self.cartan[1][0] + r[1] * self.cartan[1][1],
        ]
    }

    /// <λ, m1 α1^∨ + m2 α2^∨> for a weight in fundamental coordinates.
    pub fn pairing(&self, w: Weight, t: Cochar) -> i64 {
        w[0] * t[0] + w[1] * t[1]
    }

    pub fn pair_root(&self, r: Root, t: Cochar) -> i64 {
        self.pairing(self.root_weight(r), t)
    }

    pub fn inner(&self, r: Root, s: Root) -> i64 {
        let mut acc = 0;
        for i in 0..2 {
            for j in 0..2 {
                acc += r[i] * s[j] * self.half_norms[i] * self.cartan[i][j];
            }
        }
        acc
    }

    pub fn is_long(&self, r: Root) -> bool {
        let max = self.positive_roots.iter().map(|&s| self.inner(s, s)).max().unwrap();
        self.inner(r, r) == max
    }

    /// β^∨ in simple coroot coordinates.
    pub fn coroot(&self, r: Root) -> Cochar {
        let n = self.inner(r, r);
        [0, 1].map(|i| {
            let num = r[i] * 2 * self.half_norms[i];
            assert_eq!(num % n, 0, "coroot coordinates are integral");
            num / n
        })
    }

    pub fn reflect(&self, i: usize, r: Root) -> Root {
        let c = self.root_weight(r)[i];
        let mut out = r;
        out[i] -= c;
        out
    }

    pub fn reflect_word(&self, word: &[usize], r: Root) -> Root {
        // rightmost letter acts first
        word.iter().rev().fold(r, |acc, &i| self.reflect(i, acc))
    }

    /// Positive roots regenerated from the simple roots and the Cartan data by
    /// root strings.
    pub fn generate_positive_roots(&self) -> BTreeSet<Root> {
        let mut found: BTreeSet<Root> = [[1, 0], [0, 1]].into_iter().collect();
        let mut queue: VecDeque<Root> = found.iter().copied().collect();
        while let Some(b) = queue.pop_front() {
            for i in 0..2 {
                let mut down = 0;
                loop {
                    let mut c = b;
                    c[i] -= down + 1;
                    if found.contains(&c) {
                        down += 1;
                    } else {
                        break;
                    }
                }
                let up = down - self.root_weight(b)[i];
                if up > 0 {
                    let mut n = b;
                    n[i] += 1;
                    if found.insert(n) {
                        queue.push_back(n);
                    }
                }
            }
        }
        found
    }

    /// The Weyl group as reduced words, found by breadth-first search on the
    /// action on roots.
    pub fn weyl_group(&self) -> Vec<WeylElement> {
        let roots = self.all_roots();
        let perm_of = |word: &[usize]| -> Vec<Root> { roots.iter().map(|&r| self.reflect_word(word, r)).collect() };
        let mut seen = vec![perm_of(&[])];
        let mut out = vec![WeylElement { word: vec![] }];
        let mut frontier = vec![vec![]];
        while !frontier.is_empty() {
            let mut next = vec![];
            for w in &frontier {
                for i in 0..2 {
                    let mut nw = vec![i];
                    nw.extend_from_slice(w);
                    let p = perm_of(&nw);
                    if !seen.contains(&p) {
                        seen.push(p);
                        out.push(WeylElement { word: nw.clone() });
                        next.push(nw);
                    }
                }
            }
            frontier = next;
        }
        out
    }
}

/// A Weyl group element as a word in the simple reflections (indices 0, 1),
/// applied right to left.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    pub word: Vec<usize>,
}

impl WeylElement {
    pub fn apply(&self, d: &RootDatum, r: Root) -> Root {
        d.reflect_word(&self.word, r)
    }

    pub fn inverse(&self) -> WeylElement {
        WeylElement { word: self.word.iter().rev().copied().collect() }
    }

    pub fn label(&self) -> String {
        if self.word.is_empty() {
            "1".into()
        } else {
            self.word.iter().map(|i| format!("s{}", i + 1)).collect::<Vec<_>>().join("")
        }
    }
}

pub fn root_label(r: Root) -> String {
    let part = |k: i64, n: &str| match k {
        0 => String::new(),
        1 => n.to_string(),
        _ => format!("{k}{n}"),
    };
    let (a, b) = (part(r[0].abs(), "a1"), part(r[1].abs(), "a2"));
    let sign = if r[0] < 0 || r[1] < 0 { "-" } else { "" };
    match (a.is_empty(), b.is_empty()) {
        (false, false) => format!("{sign}({a}+{b})"),
        (false, true) => format!("{sign}{a}"),
        _ => format!("{sign}{b}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairings() {
        let g2 = RootDatum::new(GroupId::G2);
        assert_eq!(g2.pair_root([0, 1], [1, 0]), -3);
        let c2 = RootDatum::new(GroupId::Sp4);
        assert_eq!(c2.pair_root([1, 0], [0, 1]), -2);
        for g in GroupId::ALL {
            let d = g.datum();
            assert_eq!(d.pair_root([1, 0], [1, 0]), 2);
            assert_eq!(d.pair_root([0, 1], [0, 1]), 2);
        }
    }

    #[test]
    fn listed_roots_are_closed_under_strings() {
        for g in GroupId::ALL {
            let d = g.datum();
            let listed: BTreeSet<Root> = d.positive_roots.iter().copied().collect();
            assert_eq!(d.generate_positive_roots(), listed, "{g}");
            let heights: Vec<i64> = d.positive_roots.iter().map(|&r| RootDatum::height(r)).collect();
            assert!(heights.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn weyl_orders() {
        let orders: Vec<usize> = GroupId::ALL.iter().map(|g| g.datum().weyl_group().len()).collect();
        assert_eq!(orders, vec![6, 8, 12]);
    }

    #[test]
    fn coroots() {
        let c2 = RootDatum::new(GroupId::Sp4);
        assert_eq!(c2.coroot([1, 2]), [1, 1]);
        assert_eq!(c2.coroot([1, 1]), [2, 1]);
        let g2 = RootDatum::new(GroupId::G2);
        assert_eq!(g2.coroot([3, 2]), [1, 2]);
        assert_eq!(g2.coroot([3, 1]), [1, 1]);
        assert!(g2.is_long([0, 1]) && !g2.is_long([2, 1]));
        assert!(c2.is_long([1, 0]) && !c2.is_long([0, 1]));
    }
}
