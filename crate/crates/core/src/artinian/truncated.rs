use alloc::vec;
use alloc::vec::Vec;

use super::table::MonomialTable;
use crate::linalg::{Echelon, SparseVec};
use crate::ring::{FieldKind, FieldScalar, Monomial, Poly};

const NOT_STD: u32 = u32::MAX;

/// A polynomial flattened for repeated multiplication.
#[derive(Clone, Debug)]
pub struct PreparedPoly {
    terms: Vec<(Vec<u32>, u32, FieldScalar)>,
}

impl PreparedPoly {
    pub fn new(p: &Poly) -> Self {
        PreparedPoly {
            terms: p
                .terms()
                .map(|(m, c)| (m.exps().to_vec(), m.degree(), c.clone()))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// `M/m^L M` for `M = A/J`, in coordinates of the standard monomials.
///
/// The relations are row-reduced over the monomial basis of `A/m^L` with
/// lowest-index pivots. Pivot monomials are rewritten through their normal
/// forms; the remaining standard monomials form a basis of `M/m^L M`. Since
/// pivots are chosen lowest-degree first, the standard monomials of degree
/// `< k` are a basis of `M/m^k M` for every `k <= L`, and the standard
/// coordinates of the lower truncation are a prefix of these.
#[derive(Clone, Debug)]
pub struct TruncatedModule {
    table: MonomialTable,
    field: FieldKind,
    std_index: Vec<u32>,
    std_monos: Vec<u32>,
    normal_forms: Vec<Option<SparseVec>>,
    std_prefix: Vec<usize>,
}

impl TruncatedModule {
    pub fn new(nvars: usize, field: FieldKind, relations: &[Poly], level: u32) -> Self {
        let table = MonomialTable::new(nvars, level);
        let dim_a = table.len();
        let mut ech = Echelon::new(dim_a, field);
        for g in relations {
            let ord = match g.ord().finite() {
                Some(o) => o,
                None => continue,
            };
            if ord >= level {
                continue;
            }
            let pg = PreparedPoly::new(g);
            for idx in 0..table.offset(level - ord) {
                let v = mul_monomial_index(&table, &pg, idx, level, field);
                ech.insert(&v);
            }
        }
        let mut std_index = vec![NOT_STD; dim_a];
        let mut std_monos = Vec::new();
        for (i, slot) in std_index.iter_mut().enumerate() {
            if !ech.is_pivot(i as u32) {
                *slot = std_monos.len() as u32;
                std_monos.push(i as u32);
            }
        }
        let mut normal_forms = vec![None; dim_a];
        for (i, slot) in normal_forms.iter_mut().enumerate() {
            if let Some(row) = ech.pivot_row(i as u32) {
                // e_i = -(tail of its row) modulo J
                let tail = SparseVec::from_sorted(row.entries()[1..].to_vec()).neg();
                let nf = ech.reduce(&tail);
                let entries = nf
                    .entries()
                    .iter()
                    .map(|(j, c)| (std_index[*j as usize], c.clone()))
                    .collect();
                *slot = Some(SparseVec::from_sorted(entries));
            }
        }
        let std_prefix = (0..=level)
            .map(|k| std_monos.partition_point(|&m| (m as usize) < table.offset(k)))
            .collect();
        TruncatedModule {
            table,
            field,
            std_index,
            std_monos,
            normal_forms,
            std_prefix,
        }
    }

    pub fn level(&self) -> u32 {
        self.table.level()
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.table.nvars()
    }

    pub fn table(&self) -> &MonomialTable {
        &self.table
    }

    /// `dim M/m^k M`, i.e. the number of standard monomials of degree `< k`.
    pub fn std_prefix(&self, k: u32) -> usize {
        self.std_prefix[k.min(self.level()) as usize]
    }

    pub fn std_count(&self) -> usize {
        self.std_monos.len()
    }

    pub fn std_monomial(&self, s: usize) -> Monomial {
        Monomial::new(self.table.exps(self.std_monos[s] as usize).to_vec())
    }

    pub fn std_degree(&self, s: usize) -> u32 {
        self.table.degree_of(self.std_monos[s] as usize)
    }

    /// Coordinates of the image of a polynomial in `M/m^k M`.
    pub fn reduce_poly(&self, p: &Poly, k: u32) -> SparseVec {
        let bound = self.std_prefix(k) as u32;
        let mut entries = Vec::new();
        for (m, c) in p.terms() {
            if m.degree() >= k.min(self.level()) {
                continue;
            }
            let idx = self.table.index(m.exps());
            self.push_monomial(idx, c, bound, &mut entries);
        }
        SparseVec::from_unsorted(entries)
    }

    fn push_monomial(&self, idx: usize, c: &FieldScalar, bound: u32, out: &mut Vec<(u32, FieldScalar)>) {
        match self.std_index[idx] {
            NOT_STD => {
                let nf = self.normal_forms[idx].as_ref().expect("pivot has a normal form");
                for (j, x) in nf.entries() {
                    if *j >= bound {
                        break;
                    }
                    out.push((*j, c.mul(x)));
                }
            }
            s => out.push((s, c.clone())),
        }
    }

    /// `p * v` in `M/m^k M`, for `v` given in standard coordinates below level `k`.
    pub fn mul(&self, p: &PreparedPoly, v: &SparseVec, k: u32) -> SparseVec {
        let k = k.min(self.level());
        let bound = self.std_prefix(k) as u32;
        let n = self.nvars();
        let mut buf = vec![0u32; n];
        let mut entries = Vec::new();
        for (s, c) in v.entries() {
            let a = self.std_monos[*s as usize] as usize;
            let ea = self.table.exps(a);
            let da: u32 = ea.iter().sum();
            for (et, dt, ct) in &p.terms {
                if da + dt >= k {
                    continue;
                }
                for i in 0..n {
                    buf[i] = ea[i] + et[i];
                }
                let idx = self.table.index(&buf);
                self.push_monomial(idx, &c.mul(ct), bound, &mut entries);
            }
        }
        SparseVec::from_unsorted(entries)
    }

    /// Converts standard coordinates back to a polynomial of degree `< level`.
    pub fn to_poly(&self, v: &SparseVec) -> Poly {
        let n = self.nvars();
        Poly::from_terms(
            n,
            self.field,
            v.entries().iter().map(|(s, c)| (self.std_monomial(*s as usize), c.clone())),
        )
    }
}

fn mul_monomial_index(table: &MonomialTable, p: &PreparedPoly, idx: usize, level: u32, field: FieldKind) -> SparseVec {
    let e = table.exps(idx);
    let de: u32 = e.iter().sum();
    let mut buf = vec![0u32; e.len()];
    let mut entries = Vec::new();
    for (et, dt, ct) in &p.terms {
        if de + dt >= level {
            continue;
        }
        for i in 0..e.len() {
            buf[i] = e[i] + et[i];
        }
        entries.push((table.index(&buf) as u32, ct.clone()));
    }
    let _ = field;
    SparseVec::from_unsorted(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::PolyRing;
    use alloc::string::String;

    fn ring() -> PolyRing {
        PolyRing::new(alloc::vec![String::from("x"), String::from("y")], FieldKind::Rationals).unwrap()
    }

    #[test]
    fn free_module_counts() {
        let tm = TruncatedModule::new(2, FieldKind::Rationals, &[], 3);
        assert_eq!(tm.std_count(), 6);
        assert_eq!(tm.std_prefix(1), 1);
        assert_eq!(tm.std_prefix(2), 3);
    }

    #[test]
    fn monomial_quotient() {
        let r = ring();
        let rel = [r.parse("y^2").unwrap(), r.parse("x^3").unwrap()];
        let tm = TruncatedModule::new(2, FieldKind::Rationals, &rel, 10);
        assert_eq!(tm.std_count(), 6);
    }

    #[test]
    fn unit_relation_kills_everything() {
        let r = ring();
        let tm = TruncatedModule::new(2, FieldKind::Rationals, &[r.parse("1 + x").unwrap()], 6);
        assert_eq!(tm.std_count(), 0);
    }

    #[test]
    fn cusp_normal_forms() {
        let r = ring();
        let tm = TruncatedModule::new(2, FieldKind::Rationals, &[r.parse("y^2 - x^3").unwrap()], 8);
        // A/(y^2 - x^3) has two standard monomials in each degree >= 1
        for k in 2..8 {
            assert_eq!(tm.std_prefix(k + 1) - tm.std_prefix(k), 2);
        }
        // y * y reduces to x^3
        let y = PreparedPoly::new(&r.parse("y").unwrap());
        let vy = tm.reduce_poly(&r.parse("y").unwrap(), 8);
        let yy = tm.mul(&y, &vy, 8);
        assert_eq!(yy, tm.reduce_poly(&r.parse("x^3").unwrap(), 8));
        assert_eq!(tm.to_poly(&yy), r.parse("x^3").unwrap());
    }
}
