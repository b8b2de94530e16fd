use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Exhaustive associativity is checked up to this order.
pub const EXHAUSTIVE_ASSOCIATIVITY_LIMIT: usize = 64;
const SPOT_CHECK_TRIPLES: usize = 10_000;

/// A finite group given by its Cayley table.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteGroup {
    labels: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    /// Builds a group from element labels and a multiplication table with
    /// `table[i][j] = index of g_i · g_j`.
    pub fn new(labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        if labels.len() != table.len() {
            return Err(Error::Format(format!(
                "{} labels for a {}-row table",
                labels.len(),
                table.len()
            )));
        }
        if !check_group_axioms(&table)? {
            return Err(Error::Validation("table violates the group axioms".into()));
        }
        let n = table.len();
        let identity = (0..n)
            .find(|&e| (0..n).all(|j| table[e][j] == j && table[j][e] == j))
            .expect("axioms checked");
        let inverses = (0..n)
            .map(|i| (0..n).find(|&j| table[i][j] == identity).expect("axioms checked"))
            .collect();
        Ok(FiniteGroup {
            labels,
            table,
            identity,
            inverses,
        })
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn multiply(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|i| (0..n).all(|j| self.table[i][j] == self.table[j][i]))
    }

    /// Conjugacy classes, each sorted, ordered by smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let mut members: Vec<usize> = (0..n)
                .map(|g| self.multiply(self.multiply(g, x), self.inverse(g)))
                .collect();
            members.sort_unstable();
            members.dedup();
            for &m in &members {
                class_of[m] = classes.len();
            }
            classes.push(members);
        }
        classes
    }

    /// Whether a subset is closed under products and inverses.
    pub fn is_subgroup(&self, subset: &[usize]) -> bool {
        let mut member = vec![false; self.order()];
        for &s in subset {
            member[s] = true;
        }
        member[self.identity]
            && subset.iter().all(|&a| {
                member[self.inverse(a)] && subset.iter().all(|&b| member[self.multiply(a, b)])
            })
    }
}

/// Checks the group axioms on a Cayley table: Latin square, two-sided
/// identity, inverses and associativity (exhaustive for order ≤ 64, otherwise
/// 10⁴ seeded random triples).
pub fn check_group_axioms(table: &[Vec<usize>]) -> Result<bool> {
    check_group_axioms_seeded(table, 0)
}

pub fn check_group_axioms_seeded(table: &[Vec<usize>], seed: u64) -> Result<bool> {
    let n = table.len();
    if n == 0 {
        return Err(Error::Format("empty multiplication table".into()));
    }
    for (i, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Format(format!(
                "table row {i} has length {}, expected {n}",
                row.len()
            )));
        }
        if let Some(&bad) = row.iter().find(|&&x| x >= n) {
            return Err(Error::Format(format!("table row {i} has out-of-range index {bad}")));
        }
    }
    let is_perm = |it: &mut dyn Iterator<Item = usize>| {
        let mut seen = vec![false; n];
        for x in it {
            if std::mem::replace(&mut seen[x], true) {
                return false;
            }
        }
        true
    };
    for i in 0..n {
        if !is_perm(&mut table[i].iter().copied()) || !is_perm(&mut (0..n).map(|r| table[r][i])) {
            return Ok(false);
        }
    }
    let Some(e) = (0..n).find(|&e| (0..n).all(|j| table[e][j] == j && table[j][e] == j)) else {
        return Ok(false);
    };
    // In a Latin square with identity every element has a right inverse;
    // require it to be two-sided.
    for i in 0..n {
        let inv = (0..n).find(|&j| table[i][j] == e).expect("latin square");
        if table[inv][i] != e {
            return Ok(false);
        }
    }
    let assoc = |a: usize, b: usize, c: usize| table[table[a][b]][c] == table[a][table[b][c]];
    if n <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT {
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if !assoc(a, b, c) {
                        return Ok(false);
                    }
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..SPOT_CHECK_TRIPLES {
            let (a, b, c) = (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n));
            if !assoc(a, b, c) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
