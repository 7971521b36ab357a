use alloc::vec;
use alloc::vec::Vec;

/// All monomials of total degree below `level`, indexed by degree first and
/// degree-reverse-lexicographically (ascending) within each degree.
///
/// Because lower degrees come first, dropping every index at or above
/// `offset(k)` is exactly reduction modulo `m^k`.
#[derive(Clone, Debug)]
pub struct MonomialTable {
    nvars: usize,
    level: u32,
    offsets: Vec<usize>,
    exps: Vec<u32>,
    binom: Vec<Vec<usize>>,
}

fn binomial_table(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut t = vec![vec![0usize; k + 1]; n + 1];
    for i in 0..=n {
        t[i][0] = 1;
        for j in 1..=k.min(i) {
            t[i][j] = t[i - 1][j - 1] + if j < i { t[i - 1][j] } else { 0 };
        }
    }
    t
}

impl MonomialTable {
    pub fn new(nvars: usize, level: u32) -> Self {
        assert!(nvars >= 1);
        let binom = binomial_table(level as usize + nvars + 1, nvars);
        let mut offsets = Vec::with_capacity(level as usize + 1);
        let mut total = 0usize;
        offsets.push(0);
        for s in 0..level as usize {
            total += binom[s + nvars - 1][nvars - 1];
            offsets.push(total);
        }
        let mut table = MonomialTable {
            nvars,
            level,
            offsets,
            exps: vec![0; total * nvars],
            binom,
        };
        let mut buf = vec![0u32; nvars];
        for s in 0..level {
            fill_degree(&mut table, &mut buf, 0, s);
        }
        table
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn len(&self) -> usize {
        *self.offsets.last().expect("offsets nonempty")
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of monomials of degree `< k` (clamped to the table level).
    pub fn offset(&self, k: u32) -> usize {
        self.offsets[k.min(self.level) as usize]
    }

    pub fn exps(&self, idx: usize) -> &[u32] {
        &self.exps[idx * self.nvars..(idx + 1) * self.nvars]
    }

    pub fn degree_of(&self, idx: usize) -> u32 {
        // offsets are increasing; find the degree block holding idx
        (self.offsets.partition_point(|&o| o <= idx) - 1) as u32
    }

    /// Index of a monomial of degree `< level`.
    pub fn index(&self, exps: &[u32]) -> usize {
        let deg: u32 = exps.iter().sum();
        debug_assert!(deg < self.level);
        self.offsets[deg as usize] + self.rank_in_degree(exps, deg)
    }

    fn rank_in_degree(&self, exps: &[u32], deg: u32) -> usize {
        let mut r = 0usize;
        let mut rem = deg;
        for j in (1..self.nvars).rev() {
            let a = exps[j];
            if rem > a {
                r += self.binom[(rem - a - 1) as usize + j][j];
            }
            rem -= a;
        }
        r
    }
}

fn fill_degree(table: &mut MonomialTable, buf: &mut [u32], var: usize, rem: u32) {
    let n = table.nvars;
    if var == n - 1 {
        buf[var] = rem;
        let deg: u32 = buf.iter().sum();
        let idx = table.offsets[deg as usize] + table.rank_in_degree(buf, deg);
        table.exps[idx * n..(idx + 1) * n].copy_from_slice(buf);
        return;
    }
    for e in 0..=rem {
        buf[var] = e;
        fill_degree(table, buf, var + 1, rem - e);
    }
    buf[var] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::monomial::degrevlex_cmp;
    use core::cmp::Ordering;

    #[test]
    fn counts_and_order() {
        let t = MonomialTable::new(2, 3);
        assert_eq!(t.len(), 6);
        let listed: Vec<Vec<u32>> = (0..t.len()).map(|i| t.exps(i).to_vec()).collect();
        assert_eq!(
            listed,
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![0, 2], vec![1, 1], vec![2, 0]]
        );
    }

    #[test]
    fn index_is_a_sorted_bijection() {
        for n in 1..=4 {
            let t = MonomialTable::new(n, 7);
            for i in 0..t.len() {
                assert_eq!(t.index(t.exps(i)), i);
                assert_eq!(t.degree_of(i), t.exps(i).iter().sum::<u32>());
                if i > 0 {
                    assert_eq!(degrevlex_cmp(t.exps(i - 1), t.exps(i)), Ordering::Less);
                }
            }
        }
    }
}
