//! Exact linear algebra over the tower fields: nullspaces by fraction-free
//! Gaussian elimination, solution bases of parameterized equations, and
//! first-row reduction.

use crate::arith::{common_poly_multiplier, gen_monomials, Elem};
use crate::tower::Tower;

/// One row (c_1..c_n, g) of a solution basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionRow {
    /// Coefficients over the constant field.
    pub coeffs: Vec<Elem>,
    pub g: Elem,
}

impl SolutionRow {
    pub fn new(coeffs: Vec<Elem>, g: Elem) -> SolutionRow {
        SolutionRow { coeffs, g }
    }

    pub fn is_first_entry(&self) -> bool {
        self.coeffs.first().is_some_and(|c| !c.is_zero())
    }
}

/// Basis of a solution space V(a, f, W): linearly independent rows spanning
/// it, at most n+1 of them. The empty basis denotes the zero space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionBasis {
    pub n: usize,
    pub rows: Vec<SolutionRow>,
    pub first_row_reduced: bool,
}

impl SolutionBasis {
    pub fn empty(n: usize) -> SolutionBasis {
        SolutionBasis { n, rows: Vec::new(), first_row_reduced: true }
    }

    pub fn new(n: usize, rows: Vec<SolutionRow>) -> SolutionBasis {
        debug_assert!(rows.len() <= n + 1, "solution space dimension exceeds n+1");
        debug_assert!(rows.iter().all(|r| r.coeffs.len() == n));
        SolutionBasis { n, rows, first_row_reduced: false }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// True if every row has zero first coefficient.
    pub fn first_column_zero(&self) -> bool {
        self.rows.iter().all(|r| !r.is_first_entry())
    }

    /// The first-entry row of a first-row-reduced basis, if any.
    pub fn first_entry_row(&self) -> Option<&SolutionRow> {
        debug_assert!(self.first_row_reduced);
        self.rows.first().filter(|r| r.is_first_entry())
    }
}

/// Span-preserving row operations so that at most the first row has a
/// nonzero first coefficient. Idempotent.
pub fn first_row_reduce(basis: &SolutionBasis) -> SolutionBasis {
    let mut rows = basis.rows.clone();
    let pivot = rows.iter().position(|r| r.is_first_entry());
    if let Some(idx) = pivot {
        rows.swap(0, idx);
        let c0 = rows[0].coeffs[0].clone();
        let head = rows[0].clone();
        for row in rows.iter_mut().skip(1) {
            if row.is_first_entry() {
                let factor = row.coeffs[0].div(&c0).expect("pivot nonzero");
                for (a, b) in row.coeffs.iter_mut().zip(&head.coeffs) {
                    *a = a.sub(&factor.mul(b));
                }
                row.g = row.g.sub(&factor.mul(&head.g));
            }
        }
    }
    SolutionBasis { n: basis.n, rows, first_row_reduced: true }
}

/// Basis of V(a, f, K) over the constant field, where sigma is the identity:
/// the equation degenerates to (a0 + a1) q = c_1 f_1 + ... + c_n f_n.
pub fn base_case_solve(tower: &Tower, a: (&Elem, &Elem), f: &[Elem]) -> SolutionBasis {
    debug_assert!(tower.is_constant(a.0) && tower.is_constant(a.1));
    debug_assert!(f.iter().all(|x| tower.is_constant(x)));
    debug_assert!(!(a.0.is_zero() && a.1.is_zero()));
    let n = f.len();
    let s = a.0.add(a.1);
    if !s.is_zero() {
        let rows = (0..n)
            .map(|i| {
                let mut c = vec![Elem::zero(); n];
                c[i] = Elem::one();
                SolutionRow::new(c, f[i].div(&s).expect("s nonzero"))
            })
            .collect();
        return SolutionBasis::new(n, rows);
    }
    // a1 = -a0: the constraint is 0 = sum c_i f_i and q is free
    let mut rows: Vec<SolutionRow> = kernel_of_combination(tower, f)
        .into_iter()
        .map(|c| SolutionRow::new(c, Elem::zero()))
        .collect();
    rows.push(SolutionRow::new(vec![Elem::zero(); n], Elem::one()));
    SolutionBasis::new(n, rows)
}

/// Kernel over the constant field of c |-> sum c_i e_i for tower elements
/// e_i: flatten to coordinates over the generator monomials and take the
/// matrix nullspace.
pub fn kernel_of_combination(tower: &Tower, elems: &[Elem]) -> Vec<Vec<Elem>> {
    let n = elems.len();
    if n == 0 {
        return Vec::new();
    }
    let v0 = tower.first_gen_var();
    let mult = common_poly_multiplier(elems, v0);
    let flats: Vec<_> = elems
        .iter()
        .map(|e| gen_monomials(&e.mul(&mult), v0).expect("cleared to polynomial"))
        .collect();
    let mut keys: Vec<Vec<u32>> = Vec::new();
    for f in &flats {
        for k in f.keys() {
            if !keys.contains(k) {
                keys.push(k.clone());
            }
        }
    }
    keys.sort();
    let rows: Vec<Vec<Elem>> = keys
        .iter()
        .map(|k| flats.iter().map(|f| f.get(k).cloned().unwrap_or_else(Elem::zero)).collect())
        .collect();
    if rows.is_empty() {
        // all elements are zero: the kernel is everything
        return (0..n)
            .map(|i| {
                let mut v = vec![Elem::zero(); n];
                v[i] = Elem::one();
                v
            })
            .collect();
    }
    nullspace_basis(&rows)
}

/// Kernel over the constant field of d |-> sum d_i columns[i] where each
/// column is a vector of tower elements (componentwise zero).
pub fn kernel_of_vector_combination(tower: &Tower, columns: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    let n = columns.len();
    if n == 0 {
        return Vec::new();
    }
    let len = columns[0].len();
    debug_assert!(columns.iter().all(|c| c.len() == len));
    let v0 = tower.first_gen_var();
    let mut rows: Vec<Vec<Elem>> = Vec::new();
    for pos in 0..len {
        let slice: Vec<Elem> = columns.iter().map(|c| c[pos].clone()).collect();
        let mult = common_poly_multiplier(&slice, v0);
        let flats: Vec<_> = slice
            .iter()
            .map(|e| gen_monomials(&e.mul(&mult), v0).expect("cleared to polynomial"))
            .collect();
        let mut keys: Vec<Vec<u32>> = flats.iter().flat_map(|f| f.keys().cloned()).collect();
        keys.sort();
        keys.dedup();
        for k in &keys {
            rows.push(flats.iter().map(|f| f.get(k).cloned().unwrap_or_else(Elem::zero)).collect());
        }
    }
    if rows.is_empty() {
        return (0..n)
            .map(|i| {
                let mut v = vec![Elem::zero(); n];
                v[i] = Elem::one();
                v
            })
            .collect();
    }
    nullspace_basis(&rows)
}

/// Basis of {v : M v = 0} by fraction-free Gaussian elimination with
/// deterministic pivoting (leftmost nonzero column, lowest row). Basis
/// vectors are indexed by the free columns in ascending order, each
/// normalized to 1 at its free column.
pub fn nullspace_basis(rows: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<Elem>> = rows
        .iter()
        .map(|r| {
            debug_assert_eq!(r.len(), ncols);
            let mult = common_poly_multiplier(r, 0);
            r.iter().map(|e| e.mul(&mult)).collect()
        })
        .collect();
    let nrows = m.len();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut prev = Elem::one();
    let mut prow = 0usize;
    for col in 0..ncols {
        if prow >= nrows {
            break;
        }
        let Some(r) = (prow..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(prow, r);
        let (head, tail) = m.split_at_mut(prow + 1);
        let prow_vec = &head[prow];
        for row in tail.iter_mut() {
            if row[col].is_zero() {
                // still rescale so the Bareiss divisions stay exact
                for j in (col + 1)..ncols {
                    let t = prow_vec[col].mul(&row[j]);
                    row[j] = t.div(&prev).expect("previous pivot nonzero");
                }
            } else {
                for j in (col + 1)..ncols {
                    let t = prow_vec[col].mul(&row[j]).sub(&row[col].mul(&prow_vec[j]));
                    row[j] = t.div(&prev).expect("previous pivot nonzero");
                }
            }
            row[col] = Elem::zero();
        }
        prev = m[prow][col].clone();
        pivots.push((prow, col));
        prow += 1;
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = Vec::new();
    for fc in 0..ncols {
        if pivot_cols.contains(&fc) {
            continue;
        }
        let mut v = vec![Elem::zero(); ncols];
        v[fc] = Elem::one();
        for &(pr, pc) in pivots.iter().rev() {
            if pc > fc {
                continue;
            }
            let mut s = Elem::zero();
            for j in (pc + 1)..ncols {
                if !v[j].is_zero() {
                    s = s.add(&m[pr][j].mul(&v[j]));
                }
            }
            v[pc] = s.neg().div(&m[pr][pc]).expect("pivot nonzero");
        }
        basis.push(v);
    }
    basis
}

/// Solve M x = b over the field; `None` if inconsistent.
pub fn linear_solve(rows: &[Vec<Elem>], rhs: &[Elem]) -> Option<Vec<Elem>> {
    debug_assert_eq!(rows.len(), rhs.len());
    let aug: Vec<Vec<Elem>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut v = r.clone();
            v.push(b.neg());
            v
        })
        .collect();
    let ncols = aug.first().map_or(1, |r| r.len());
    for v in nullspace_basis(&aug) {
        let t = &v[ncols - 1];
        if !t.is_zero() {
            let inv = t.inv().expect("nonzero");
            return Some(v[..ncols - 1].iter().map(|x| x.mul(&inv)).collect());
        }
    }
    if rows.is_empty() {
        return Some(Vec::new());
    }
    None
}

/// True iff the row (c, g) lies in the span of the basis rows over the
/// constant field. Used by the golden tests for span comparisons.
pub fn row_in_span(tower: &Tower, basis: &SolutionBasis, row: &SolutionRow) -> bool {
    let n = basis.n;
    debug_assert_eq!(row.coeffs.len(), n);
    // flatten g parts over a common denominator
    let v0 = tower.first_gen_var();
    let mut all: Vec<Elem> = basis.rows.iter().map(|r| r.g.clone()).collect();
    all.push(row.g.clone());
    let mult = common_poly_multiplier(&all, v0);
    let mut keys: Vec<Vec<u32>> = Vec::new();
    let flats: Vec<_> = all
        .iter()
        .map(|e| gen_monomials(&e.mul(&mult), v0).expect("cleared"))
        .collect();
    for f in &flats {
        for k in f.keys() {
            if !keys.contains(k) {
                keys.push(k.clone());
            }
        }
    }
    keys.sort();
    // unknowns: one weight per basis row; equations: coeffs and g coordinates
    let mut mat: Vec<Vec<Elem>> = Vec::new();
    let mut rhs: Vec<Elem> = Vec::new();
    for j in 0..n {
        mat.push(basis.rows.iter().map(|r| r.coeffs[j].clone()).collect());
        rhs.push(row.coeffs[j].clone());
    }
    for k in &keys {
        mat.push(
            flats[..basis.rows.len()]
                .iter()
                .map(|f| f.get(k).cloned().unwrap_or_else(Elem::zero))
                .collect(),
        );
        rhs.push(flats[basis.rows.len()].get(k).cloned().unwrap_or_else(Elem::zero));
    }
    linear_solve(&mat, &rhs).is_some()
}

/// Mutual-membership span equality of two bases.
pub fn span_eq(tower: &Tower, a: &SolutionBasis, b: &SolutionBasis) -> bool {
    a.n == b.n
        && a.rows.iter().all(|r| row_in_span(tower, b, r))
        && b.rows.iter().all(|r| row_in_span(tower, a, r))
}

/// Rank check: rows of the basis are linearly independent over K.
pub fn rows_independent(tower: &Tower, basis: &SolutionBasis) -> bool {
    let v0 = tower.first_gen_var();
    let gs: Vec<Elem> = basis.rows.iter().map(|r| r.g.clone()).collect();
    let mult = common_poly_multiplier(&gs, v0);
    let flats: Vec<_> = gs
        .iter()
        .map(|e| gen_monomials(&e.mul(&mult), v0).expect("cleared"))
        .collect();
    let mut keys: Vec<Vec<u32>> = Vec::new();
    for f in &flats {
        for k in f.keys() {
            if !keys.contains(k) {
                keys.push(k.clone());
            }
        }
    }
    keys.sort();
    // columns = rows of the basis
    let mut mat: Vec<Vec<Elem>> = Vec::new();
    for j in 0..basis.n {
        mat.push(basis.rows.iter().map(|r| r.coeffs[j].clone()).collect());
    }
    for k in &keys {
        mat.push(flats.iter().map(|f| f.get(k).cloned().unwrap_or_else(Elem::zero)).collect());
    }
    if basis.rows.is_empty() {
        return true;
    }
    nullspace_basis(&mat).is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q_ratio;

    fn q(n: i64) -> Elem {
        Elem::from_i64(n)
    }

    #[test]
    fn nullspace_goldens() {
        // identity 2x2 -> empty
        let id = vec![vec![q(1), q(0)], vec![q(0), q(1)]];
        assert!(nullspace_basis(&id).is_empty());
        // zero 1x2 -> two basis vectors
        let z = vec![vec![q(0), q(0)]];
        assert_eq!(nullspace_basis(&z).len(), 2);
        // [[1, 2]] -> {(-2, 1)}
        let m = vec![vec![q(1), q(2)]];
        assert_eq!(nullspace_basis(&m), vec![vec![q(-2), q(1)]]);
    }

    #[test]
    fn base_case_goldens() {
        let t = Tower::constant_field(&[]);
        // a = (0,1), f = (2,0): basis spans {(1/2,0,1),(0,1,0)}
        let b = base_case_solve(&t, (&q(0), &q(1)), &[q(2), q(0)]);
        assert_eq!(b.dim(), 2);
        let want = SolutionBasis::new(
            2,
            vec![
                SolutionRow::new(vec![Elem::from_q(q_ratio(1, 2)), q(0)], q(1)),
                SolutionRow::new(vec![q(0), q(1)], q(0)),
            ],
        );
        assert!(span_eq(&t, &b, &want));
        // a = (-1,1): homogeneous q free
        let b = base_case_solve(&t, (&q(-1), &q(1)), &[q(3)]);
        assert!(b.rows.iter().any(|r| r.coeffs[0].is_zero() && r.g.is_one()));
        // a = (1,1), f = (4): single row (1,2), no homogeneous row
        let b = base_case_solve(&t, (&q(1), &q(1)), &[q(4)]);
        assert_eq!(b.dim(), 1);
        assert_eq!(b.rows[0], SolutionRow::new(vec![q(1)], q(2)));
    }

    #[test]
    fn first_row_reduce_goldens() {
        let g1 = q(10);
        let g2 = q(20);
        let b = SolutionBasis::new(
            2,
            vec![
                SolutionRow::new(vec![q(1), q(2)], g1.clone()),
                SolutionRow::new(vec![q(2), q(1)], g2.clone()),
            ],
        );
        let r = first_row_reduce(&b);
        assert_eq!(r.rows[0], SolutionRow::new(vec![q(1), q(2)], g1.clone()));
        assert_eq!(r.rows[1], SolutionRow::new(vec![q(0), q(-3)], g2.sub(&q(2).mul(&g1))));
        // idempotent
        assert_eq!(first_row_reduce(&r).rows, r.rows);
        // single row with zero first entry stays put
        let b = SolutionBasis::new(1, vec![SolutionRow::new(vec![q(0)], q(5))]);
        assert_eq!(first_row_reduce(&b).rows, b.rows);
        // empty stays empty
        let e = SolutionBasis::empty(3);
        assert!(first_row_reduce(&e).rows.is_empty());
    }

    #[test]
    fn kernel_over_tower() {
        use crate::tower::factorial_harmonic_tower;
        let t = factorial_harmonic_tower();
        let k = t.gen_elem(1);
        let h = t.gen_elem(3);
        // kernel of (h, 2h, k): c1 + 2 c2 = 0 with c3 = 0
        let ker = kernel_of_combination(&t, &[h.clone(), h.mul(&q(2)), k]);
        assert_eq!(ker, vec![vec![q(-2), q(1), q(0)]]);
    }

    #[test]
    fn span_machinery() {
        let t = Tower::rational(&[]);
        let k = t.gen_elem(1);
        let a = SolutionBasis::new(
            1,
            vec![SolutionRow::new(vec![q(2)], k.mul(&q(2)))],
        );
        let b = SolutionBasis::new(1, vec![SolutionRow::new(vec![q(1)], k.clone())]);
        assert!(span_eq(&t, &a, &b));
        let c = SolutionBasis::new(1, vec![SolutionRow::new(vec![q(1)], k.add(&q(1)))]);
        assert!(!span_eq(&t, &a, &c));
        assert!(rows_independent(&t, &a));
    }
}
