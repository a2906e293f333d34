//! Full solution bases of first-order parameterized linear difference
//! equations a1*sigma(q) + a0*q = c1 f1 + ... + cn fn over a tower field:
//! denominator bounding, degree bounding, and coefficient-peeling degree
//! reduction, with a direct-ansatz fast path at the rational base.

use crate::arith::{plcm, Elem};
use crate::bounds::{degree_bound_fplde, denominator_bound};
use crate::error::Result;
use crate::linsolve::{
    base_case_solve, kernel_of_combination, kernel_of_vector_combination, SolutionBasis,
    SolutionRow,
};
use crate::tower::Tower;
use crate::{Config, Flags};

/// Exact check of a basis row against its defining equation.
pub fn verify_row(tower: &Tower, a: (&Elem, &Elem), f: &[Elem], row: &SolutionRow) -> bool {
    let lhs = a.1.mul(&tower.sigma(&row.g)).add(&a.0.mul(&row.g));
    let mut rhs = Elem::zero();
    for (c, fi) in row.coeffs.iter().zip(f) {
        rhs = rhs.add(&c.mul(fi));
    }
    lhs == rhs
}

fn debug_verify(tower: &Tower, a: (&Elem, &Elem), f: &[Elem], basis: &SolutionBasis) {
    if cfg!(debug_assertions) {
        for row in &basis.rows {
            debug_assert!(
                verify_row(tower, a, f, row),
                "certificate identity violated: c = {:?}, g = {}",
                row.coeffs.iter().map(|c| tower.render_elem(c)).collect::<Vec<_>>(),
                tower.render_elem(&row.g),
            );
        }
    }
}

/// Basis of V(a, f, F) at the given level of the tower, F the field
/// Q(params)(t_1)...(t_level). Returns the basis plus incompleteness flags.
pub fn solve_fplde(
    tower: &Tower,
    level: usize,
    a: (&Elem, &Elem),
    f: &[Elem],
    cfg: &Config,
) -> Result<(SolutionBasis, Flags)> {
    let mut flags = Flags::default();
    let basis = solve_fplde_inner(tower, level, a, f, cfg, &mut flags)?;
    Ok((basis, flags))
}

pub(crate) fn solve_fplde_inner(
    tower: &Tower,
    level: usize,
    a: (&Elem, &Elem),
    f: &[Elem],
    cfg: &Config,
    flags: &mut Flags,
) -> Result<SolutionBasis> {
    assert!(!(a.0.is_zero() && a.1.is_zero()), "FPLDE needs (a0, a1) != (0, 0)");
    let n = f.len();

    // degenerate case a0*a1 = 0: q is determined linearly by the c's
    if a.0.is_zero() || a.1.is_zero() {
        let rows = (0..n)
            .map(|i| {
                let mut c = vec![Elem::zero(); n];
                c[i] = Elem::one();
                let g = if a.0.is_zero() {
                    tower.sigma_inv(&f[i].div(a.1).expect("a1 nonzero"))
                } else {
                    f[i].div(a.0).expect("a0 nonzero")
                };
                SolutionRow::new(c, g)
            })
            .collect();
        let basis = SolutionBasis::new(n, rows);
        debug_verify(tower, a, f, &basis);
        return Ok(basis);
    }

    if level == 0 {
        let basis = base_case_solve(tower, a, f);
        debug_verify(tower, a, f, &basis);
        return Ok(basis);
    }

    if level == 1 && cfg.rational_direct {
        let basis = solve_rational_direct(tower, a, f, cfg, flags)?;
        debug_verify(tower, a, f, &basis);
        return Ok(basis);
    }

    // Step 1: denominator bound; Step 2: clear denominators
    let den = denominator_bound(tower, level, a, f, cfg, flags)?;
    let (a0p, a1p, fp) = clear_level(tower, level, &den.d, a, f);
    // Step 3: degree bound satisfying the covering inequality
    let m = degree_bound_fplde(tower, level, (&a0p, &a1p), &fp, cfg, flags)?;
    // Step 4: degree reduction; Step 5: restore the denominator
    let reduced = degree_reduction_fplde(tower, level, m, (&a0p, &a1p), &fp, cfg, flags)?;
    let rows = reduced
        .rows
        .into_iter()
        .map(|r| SolutionRow::new(r.coeffs, r.g.div(&den.d).expect("denominator nonzero")))
        .collect();
    let basis = SolutionBasis::new(n, rows);
    debug_verify(tower, a, f, &basis);
    Ok(basis)
}

/// Rewrite V((a0/d, a1/sigma(d)), f, A[t]) with polynomial data: scaling the
/// equation by a common level denominator changes nothing.
fn clear_level(
    tower: &Tower,
    level: usize,
    d: &Elem,
    a: (&Elem, &Elem),
    f: &[Elem],
) -> (Elem, Elem, Vec<Elem>) {
    let v = tower.var_of_level(level);
    let q0 = a.0.div(d).expect("d nonzero");
    let q1 = a.1.div(&tower.sigma(d)).expect("sigma(d) nonzero");
    let mut u = vec![Elem::one()];
    for e in [&q0, &q1].into_iter().chain(f.iter()) {
        let (_, den) = e.num_den_at(v);
        u = plcm(&u, &den);
    }
    let u = Elem::ratfun(v, u, vec![Elem::one()]);
    (q0.mul(&u), q1.mul(&u), f.iter().map(|x| x.mul(&u)).collect())
}

/// Direct ansatz at the rational base: one linear system over the constant
/// field in the numerator coefficients and the c's.
fn solve_rational_direct(
    tower: &Tower,
    a: (&Elem, &Elem),
    f: &[Elem],
    cfg: &Config,
    flags: &mut Flags,
) -> Result<SolutionBasis> {
    let n = f.len();
    let v = tower.var_of_level(1);
    let den = denominator_bound(tower, 1, a, f, cfg, flags)?;
    let (a0p, a1p, fp) = clear_level(tower, 1, &den.d, a, f);
    let m = degree_bound_fplde(tower, 1, (&a0p, &a1p), &fp, cfg, flags)?;
    // columns: c_i contributes -f'_i, the coefficient q_j contributes
    // a'1 (x+1)^j + a'0 x^j
    let x = Elem::var(v);
    let x1 = x.add(&Elem::one());
    let mut cols: Vec<Elem> = fp.iter().map(|fi| fi.neg()).collect();
    for j in 0..=m.max(-1) {
        let col = a1p.mul(&x1.pow_i64(j).unwrap()).add(&a0p.mul(&x.pow_i64(j).unwrap()));
        cols.push(col);
    }
    let kernel = kernel_of_combination(tower, &cols);
    let rows = kernel
        .into_iter()
        .map(|vres| {
            let coeffs = vres[..n].to_vec();
            let mut g = Elem::zero();
            for (j, qj) in vres[n..].iter().enumerate() {
                g = g.add(&qj.mul(&x.pow_i64(j as i64).unwrap()));
            }
            SolutionRow::new(coeffs, g.div(&den.d).expect("denominator nonzero"))
        })
        .collect();
    Ok(SolutionBasis::new(n, rows))
}

/// Basis of V(a', f', A[t]_m) for polynomial data at the given level, by
/// peeling the leading coefficient and recursing on the remainder.
/// Precondition: m >= max deg(f') - max deg(a') (the covering inequality).
pub fn degree_reduction_fplde(
    tower: &Tower,
    level: usize,
    m: i64,
    a: (&Elem, &Elem),
    f: &[Elem],
    cfg: &Config,
    flags: &mut Flags,
) -> Result<SolutionBasis> {
    let v = tower.var_of_level(level);
    let n = f.len();
    debug_assert!(!a.0.is_zero() && !a.1.is_zero());
    debug_assert!(a.0.is_poly_at(v) && a.1.is_poly_at(v));
    debug_assert!(f.iter().all(|x| x.is_poly_at(v)));

    if m < 0 {
        // A[t]_{-1} = {0}: parameter kernel only
        let rows = kernel_of_combination(tower, f)
            .into_iter()
            .map(|c| SolutionRow::new(c, Elem::zero()))
            .collect();
        return Ok(SolutionBasis::new(n, rows));
    }

    let l = a.0.deg_at(v)?.max(a.1.deg_at(v)?);
    debug_assert!(
        f.iter().all(|x| x.deg_at(v).unwrap() <= m + l),
        "covering inequality violated"
    );

    if m == 0 {
        return solve_in_coefficient_field(tower, level, a, f, cfg, flags);
    }

    let alpha = tower.gen(level).alpha.clone();
    let atilde = (
        a.0.coeff_at(v, l as usize)?,
        alpha.pow_i64(m).unwrap().mul(&a.1.coeff_at(v, l as usize)?),
    );
    let ftilde: Vec<Elem> =
        f.iter().map(|x| x.coeff_at(v, (m + l) as usize)).collect::<Result<_>>()?;
    let lead = solve_fplde_inner(tower, level - 1, (&atilde.0, &atilde.1), &ftilde, cfg, flags)?;

    if lead.rows.is_empty() {
        // no admissible leading coefficient: only a homogeneous solution of
        // lower degree can survive
        let hom = degree_reduction_fplde(tower, level, m - 1, a, &[Elem::zero()], cfg, flags)?;
        if let Some(h) = hom.rows.iter().find(|r| !r.g.is_zero()) {
            return Ok(SolutionBasis::new(
                n,
                vec![SolutionRow::new(vec![Elem::zero(); n], h.g.clone())],
            ));
        }
        return Ok(SolutionBasis::empty(n));
    }

    let tm = Elem::var(v).pow_i64(m).unwrap();
    let phi: Vec<Elem> = lead
        .rows
        .iter()
        .map(|row| {
            let mut acc = Elem::zero();
            for (cij, fj) in row.coeffs.iter().zip(f) {
                acc = acc.add(&cij.mul(fj));
            }
            let gt = row.g.mul(&tm);
            acc.sub(&a.1.mul(&tower.sigma(&gt)).add(&a.0.mul(&gt)))
        })
        .collect();
    debug_assert!(phi.iter().all(|p| p.deg_at(v).unwrap() <= m + l - 1));

    let sub = degree_reduction_fplde(tower, level, m - 1, a, &phi, cfg, flags)?;
    if sub.rows.is_empty() {
        return Ok(SolutionBasis::empty(n));
    }
    Ok(merge_reduction(&lead, &sub, &tm, n))
}

/// Combine a leading-coefficient basis (C, g) with the recursive basis
/// (D, h): E = D C and p = D g t^m + h.
pub(crate) fn merge_reduction(
    lead: &SolutionBasis,
    sub: &SolutionBasis,
    tm: &Elem,
    n: usize,
) -> SolutionBasis {
    let rows = sub
        .rows
        .iter()
        .map(|srow| {
            debug_assert_eq!(srow.coeffs.len(), lead.rows.len());
            let mut coeffs = vec![Elem::zero(); n];
            let mut gacc = Elem::zero();
            for (dij, lrow) in srow.coeffs.iter().zip(&lead.rows) {
                if dij.is_zero() {
                    continue;
                }
                for (e, c) in coeffs.iter_mut().zip(&lrow.coeffs) {
                    *e = e.add(&dij.mul(c));
                }
                gacc = gacc.add(&dij.mul(&lrow.g));
            }
            SolutionRow::new(coeffs, gacc.mul(tm).add(&srow.g))
        })
        .collect();
    SolutionBasis::new(n, rows)
}

/// V(a', f', A) with a', f' in A[t] but the unknown q one level down:
/// comparing coefficients of every t-power gives a coupled system sharing
/// one q. Solve the top-coefficient equation, then filter its basis by the
/// remaining coefficient constraints.
fn solve_in_coefficient_field(
    tower: &Tower,
    level: usize,
    a: (&Elem, &Elem),
    f: &[Elem],
    cfg: &Config,
    flags: &mut Flags,
) -> Result<SolutionBasis> {
    let v = tower.var_of_level(level);
    let n = f.len();
    let l = a.0.deg_at(v)?.max(a.1.deg_at(v)?);
    let mut top = l;
    for x in f {
        top = top.max(x.deg_at(v)?);
    }
    let anchor = (a.0.coeff_at(v, l as usize)?, a.1.coeff_at(v, l as usize)?);
    let fanchor: Vec<Elem> =
        f.iter().map(|x| x.coeff_at(v, l as usize)).collect::<Result<_>>()?;
    let base = solve_fplde_inner(tower, level - 1, (&anchor.0, &anchor.1), &fanchor, cfg, flags)?;
    if base.rows.is_empty() || top == 0 {
        return Ok(base);
    }
    // residuals of each anchor row at every other t-coefficient
    let mut columns: Vec<Vec<Elem>> = Vec::with_capacity(base.rows.len());
    for row in &base.rows {
        let sg = tower.sigma(&row.g);
        let mut col = Vec::new();
        for j in 0..=top {
            if j == l {
                continue;
            }
            let mut w = a
                .1
                .coeff_at(v, j as usize)?
                .mul(&sg)
                .add(&a.0.coeff_at(v, j as usize)?.mul(&row.g));
            for (c, fi) in row.coeffs.iter().zip(f) {
                w = w.sub(&c.mul(&fi.coeff_at(v, j as usize)?));
            }
            col.push(w);
        }
        columns.push(col);
    }
    let kernel = kernel_of_vector_combination(tower, &columns);
    let rows = kernel
        .into_iter()
        .map(|d| {
            let mut coeffs = vec![Elem::zero(); n];
            let mut g = Elem::zero();
            for (di, row) in d.iter().zip(&base.rows) {
                if di.is_zero() {
                    continue;
                }
                for (e, c) in coeffs.iter_mut().zip(&row.coeffs) {
                    *e = e.add(&di.mul(c));
                }
                g = g.add(&di.mul(&row.g));
            }
            SolutionRow::new(coeffs, g)
        })
        .collect();
    Ok(SolutionBasis::new(n, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q_ratio;
    use crate::linsolve::span_eq;
    use crate::tower::factorial_harmonic_tower;

    fn cfgs() -> [Config; 2] {
        [Config::default(), Config { rational_direct: false, ..Config::default() }]
    }

    #[test]
    fn fplde_rational_golden() {
        // a = (-1, 1+k), f = (2k, 0) over Q(k): span {(1/2,0,1),(0,1,0)}
        let t = factorial_harmonic_tower();
        let k = t.gen_elem(1);
        let one = Elem::one();
        let a1 = k.add(&one);
        let f = [k.mul(&Elem::from_i64(2)), Elem::zero()];
        for cfg in cfgs() {
            let (basis, flags) = solve_fplde(&t, 1, (&one.neg(), &a1), &f, &cfg).unwrap();
            assert!(!flags.bound_limited);
            let want = SolutionBasis::new(
                2,
                vec![
                    SolutionRow::new(vec![Elem::from_q(q_ratio(1, 2)), Elem::zero()], one.clone()),
                    SolutionRow::new(vec![Elem::zero(), one.clone()], Elem::zero()),
                ],
            );
            assert!(span_eq(&t, &basis, &want), "got {basis:?}");
            for row in &basis.rows {
                assert!(verify_row(&t, (&one.neg(), &a1), &f, row));
            }
        }
    }

    #[test]
    fn fplde_degenerate_branch() {
        // a = (0,1), f = (1): q = sigma^{-1}(c1 f1 / a1) -> {(1,1)}
        let t = factorial_harmonic_tower();
        let one = Elem::one();
        let (basis, _) =
            solve_fplde(&t, 1, (&Elem::zero(), &one), &[one.clone()], &Config::default()).unwrap();
        assert_eq!(basis.dim(), 1);
        assert_eq!(basis.rows[0], SolutionRow::new(vec![one.clone()], one.clone()));
    }

    #[test]
    fn fplde_pi_level_golden() {
        // a = (-1, 1), f = (2kp, -2/(k+1)) over Q(k)(p): span {(1/2,0,p),(0,0,1)}
        let t = factorial_harmonic_tower();
        let k = t.gen_elem(1);
        let p = t.gen_elem(2);
        let one = Elem::one();
        let f = [
            k.mul(&p).mul(&Elem::from_i64(2)),
            Elem::from_i64(-2).div(&k.add(&one)).unwrap(),
        ];
        let (basis, _) = solve_fplde(&t, 2, (&one.neg(), &one), &f, &Config::default()).unwrap();
        let want = SolutionBasis::new(
            2,
            vec![
                SolutionRow::new(vec![Elem::from_q(q_ratio(1, 2)), Elem::zero()], p.clone()),
                SolutionRow::new(vec![Elem::zero(), Elem::zero()], one.clone()),
            ],
        );
        assert!(span_eq(&t, &basis, &want), "got {basis:?}");
    }

    #[test]
    fn fplde_pi_level_no_first_entry() {
        // f = ((-k-2)p/(2(k+1)), -1/(k+1)): span {(0,0,1)}
        let t = factorial_harmonic_tower();
        let k = t.gen_elem(1);
        let p = t.gen_elem(2);
        let one = Elem::one();
        let k1 = k.add(&one);
        let f = [
            k.add(&Elem::from_i64(2)).neg().mul(&p).div(&k1.mul(&Elem::from_i64(2))).unwrap(),
            one.neg().div(&k1).unwrap(),
        ];
        let (basis, _) = solve_fplde(&t, 2, (&one.neg(), &one), &f, &Config::default()).unwrap();
        let want = SolutionBasis::new(
            2,
            vec![SolutionRow::new(vec![Elem::zero(), Elem::zero()], one.clone())],
        );
        assert!(span_eq(&t, &basis, &want), "got {basis:?}");
    }

    #[test]
    fn degree_reduction_kernel_case() {
        // m = -1, f' = (0, 0): parameter kernel, no g part
        let t = factorial_harmonic_tower();
        let one = Elem::one();
        let mut flags = Flags::default();
        let basis = degree_reduction_fplde(
            &t,
            1,
            -1,
            (&one.neg(), &one),
            &[Elem::zero(), Elem::zero()],
            &Config::default(),
            &mut flags,
        )
        .unwrap();
        assert_eq!(basis.dim(), 2);
        assert!(basis.rows.iter().all(|r| r.g.is_zero()));
    }

    #[test]
    fn degree_reduction_output_span() {
        // the reduction run with the survey's loose bound m = 1 spans the
        // same space as the tight computation
        let t = factorial_harmonic_tower();
        let k = t.gen_elem(1);
        let one = Elem::one();
        let a = (one.neg(), k.add(&one));
        let f = [k.mul(&Elem::from_i64(2)), Elem::zero()];
        let mut flags = Flags::default();
        let loose =
            degree_reduction_fplde(&t, 1, 1, (&a.0, &a.1), &f, &Config::default(), &mut flags)
                .unwrap();
        let (tight, _) = solve_fplde(&t, 1, (&a.0, &a.1), &f, &Config::default()).unwrap();
        assert!(span_eq(&t, &loose, &tight));
    }
}
