//! Parameterized telescoping sigma(g) - g = c1 f1 + ... + cn fn, exploiting
//! the split of the top-level field into proper fractions plus polynomials:
//! the two parts telescope independently, the rational part is solved first,
//! and the polynomial part is degree-reduced on the combined vector C p.
//!
//! The same pipeline runs in three modes: full basis, full basis with early
//! abort (stop as soon as the result provably contains no first-entry row),
//! and the single-row first-entry/reduced variants built on top of it in
//! `refined`.

use crate::arith::Elem;
use crate::bounds::degree_bound_pt;
use crate::error::{Error, Result};
use crate::fplde::{degree_reduction_fplde, merge_reduction, solve_fplde_inner, verify_row};
use crate::linsolve::{first_row_reduce, kernel_of_combination, SolutionBasis, SolutionRow};
use crate::tower::{GenKind, Tower};
use crate::{Config, Flags};

/// Result of a pipeline run that may abort early.
#[derive(Clone, Debug)]
pub enum PtOutcome {
    Basis(SolutionBasis),
    /// Early-abort mode only: the solution space provably contains no row
    /// with nonzero first coefficient.
    NoFirstEntry,
}

impl PtOutcome {
    pub fn basis(self) -> SolutionBasis {
        match self {
            PtOutcome::Basis(b) => b,
            PtOutcome::NoFirstEntry => panic!("aborted outcome in full-basis mode"),
        }
    }
}

/// Basis of V(f, F) = V((-1,1), f, F) at the given level.
pub fn solve_pt(
    tower: &Tower,
    level: usize,
    f: &[Elem],
    cfg: &Config,
) -> Result<(SolutionBasis, Flags)> {
    let mut flags = Flags::default();
    let out = solve_pt_inner(tower, level, f, cfg, &mut flags, false)?;
    Ok((out.basis(), flags))
}

/// Full-basis pipeline; with `abort` set it gives up as soon as no
/// first-entry solution can exist (the basis is then never materialized).
pub(crate) fn solve_pt_inner(
    tower: &Tower,
    level: usize,
    f: &[Elem],
    cfg: &Config,
    flags: &mut Flags,
    abort: bool,
) -> Result<PtOutcome> {
    let n = f.len();
    debug_assert!(f.iter().all(|x| tower.split_level(x) <= level));

    if level == 0 {
        // sigma is the identity on the constants: 0 = sum c_i f_i, q free
        let mut rows: Vec<SolutionRow> = kernel_of_combination(tower, f)
            .into_iter()
            .map(|c| SolutionRow::new(c, Elem::zero()))
            .collect();
        rows.push(SolutionRow::new(vec![Elem::zero(); n], Elem::one()));
        return finish(tower, level, f, SolutionBasis::new(n, rows), abort);
    }

    let v = tower.var_of_level(level);
    let mut rat = Vec::with_capacity(n);
    let mut pol = Vec::with_capacity(n);
    for x in f {
        let (r, p) = x.split_fraction_at(v);
        rat.push(r);
        pol.push(p);
    }

    // Step 1: the rational part
    let b1 = if rat.iter().all(|r| r.is_zero()) {
        unit_basis(n)
    } else {
        first_row_reduce(&rational_part_basis(tower, level, &rat, cfg, flags)?)
    };
    if b1.rows.is_empty() {
        // V = {0}^n x K
        let basis = constant_only_basis(n);
        return finish(tower, level, f, basis, abort);
    }
    if abort && b1.first_column_zero() {
        return Ok(PtOutcome::NoFirstEntry);
    }

    // Step 2: the polynomial part on the combined vector f' = C p
    let fprime: Vec<Elem> = b1
        .rows
        .iter()
        .map(|row| {
            let mut acc = Elem::zero();
            for (c, p) in row.coeffs.iter().zip(&pol) {
                acc = acc.add(&c.mul(p));
            }
            acc
        })
        .collect();
    let b2 = if fprime.iter().all(|x| x.is_zero()) {
        // V(0, A[t]) = K^lambda x K
        let mut b = unit_basis(fprime.len());
        b.rows.push(SolutionRow::new(vec![Elem::zero(); fprime.len()], Elem::one()));
        b
    } else {
        let m = degree_bound_pt(tower, level, &fprime)?;
        match degree_reduction_rat_inner(tower, level, m, &fprime, cfg, flags, abort)? {
            PtOutcome::Basis(b) => b,
            PtOutcome::NoFirstEntry => return Ok(PtOutcome::NoFirstEntry),
        }
    };
    let b2 = first_row_reduce(&b2);
    if abort && b2.first_column_zero() {
        return Ok(PtOutcome::NoFirstEntry);
    }

    // Step 3: combine (E = D C, q = D g + h)
    let merged = merge_reduction(&b1, &b2, &Elem::one(), n);
    finish(tower, level, f, merged, abort)
}

fn finish(
    tower: &Tower,
    _level: usize,
    f: &[Elem],
    basis: SolutionBasis,
    abort: bool,
) -> Result<PtOutcome> {
    if cfg!(debug_assertions) {
        let neg = Elem::one().neg();
        let one = Elem::one();
        for row in &basis.rows {
            debug_assert!(
                verify_row(tower, (&neg, &one), f, row),
                "telescoping certificate violated for g = {}",
                tower.render_elem(&row.g)
            );
        }
    }
    if abort {
        let reduced = first_row_reduce(&basis);
        if reduced.first_column_zero() {
            return Ok(PtOutcome::NoFirstEntry);
        }
        return Ok(PtOutcome::Basis(reduced));
    }
    Ok(PtOutcome::Basis(basis))
}

fn unit_basis(n: usize) -> SolutionBasis {
    let rows = (0..n)
        .map(|i| {
            let mut c = vec![Elem::zero(); n];
            c[i] = Elem::one();
            SolutionRow::new(c, Elem::zero())
        })
        .collect();
    let mut b = SolutionBasis::new(n, rows);
    b.first_row_reduced = true;
    b
}

fn constant_only_basis(n: usize) -> SolutionBasis {
    let mut b =
        SolutionBasis::new(n, vec![SolutionRow::new(vec![Elem::zero(); n], Elem::one())]);
    b.first_row_reduced = true;
    b
}

/// Basis of V(r, proper fractions): bound the denominator, fix the numerator
/// degree at deg(d) - 1, and run the general degree reduction.
pub(crate) fn rational_part_basis(
    tower: &Tower,
    level: usize,
    rat: &[Elem],
    cfg: &Config,
    flags: &mut Flags,
) -> Result<SolutionBasis> {
    let v = tower.var_of_level(level);
    let n = rat.len();
    let minus_one = Elem::one().neg();
    let one = Elem::one();
    let den = crate::bounds::denominator_bound(tower, level, (&minus_one, &one), rat, cfg, flags)?;
    let ddeg = den.d.deg_at(v)?;
    let (a0p, a1p, rp) = clear_for_numerators(tower, level, &den.d, rat);
    let reduced =
        degree_reduction_fplde(tower, level, ddeg - 1, (&a0p, &a1p), &rp, cfg, flags)?;
    let rows = reduced
        .rows
        .into_iter()
        .map(|r| SolutionRow::new(r.coeffs, r.g.div(&den.d).expect("denominator nonzero")))
        .collect();
    Ok(SolutionBasis::new(n, rows))
}

fn clear_for_numerators(
    tower: &Tower,
    level: usize,
    d: &Elem,
    rat: &[Elem],
) -> (Elem, Elem, Vec<Elem>) {
    use crate::arith::plcm;
    let v = tower.var_of_level(level);
    let sd = tower.sigma(d);
    let mut u = plcm(
        &d.poly_coeffs_at(v).expect("denominator bound is polynomial"),
        &sd.poly_coeffs_at(v).expect("shifted bound is polynomial"),
    );
    for r in rat {
        let (_, den) = r.num_den_at(v);
        u = plcm(&u, &den);
    }
    let u = Elem::ratfun(v, u, vec![Elem::one()]);
    let a0p = u.div(d).expect("nonzero").neg();
    let a1p = u.div(&sd).expect("nonzero");
    let rp = rat.iter().map(|r| r.mul(&u)).collect();
    (a0p, a1p, rp)
}

/// Basis of V(f', A[t]_m) for the telescoping pair a = (-1, 1): peel the
/// top coefficient (a telescoping problem one level down when alpha = 1, a
/// general first-order problem otherwise) and recurse.
pub fn degree_reduction_rat(
    tower: &Tower,
    level: usize,
    m: i64,
    fprime: &[Elem],
    cfg: &Config,
) -> Result<(SolutionBasis, Flags)> {
    let mut flags = Flags::default();
    let out = degree_reduction_rat_inner(tower, level, m, fprime, cfg, &mut flags, false)?;
    Ok((out.basis(), flags))
}

pub(crate) fn degree_reduction_rat_inner(
    tower: &Tower,
    level: usize,
    m: i64,
    fprime: &[Elem],
    cfg: &Config,
    flags: &mut Flags,
    abort: bool,
) -> Result<PtOutcome> {
    let v = tower.var_of_level(level);
    let n = fprime.len();
    debug_assert!(fprime.iter().all(|x| x.is_poly_at(v) && x.deg_at(v).unwrap() <= m));

    if m < 0 {
        // V(f', {0}): parameter kernel with no g part
        let rows = kernel_of_combination(tower, fprime)
            .into_iter()
            .map(|c| SolutionRow::new(c, Elem::zero()))
            .collect();
        return Ok(PtOutcome::Basis(SolutionBasis::new(n, rows)));
    }
    if m == 0 {
        return solve_pt_inner(tower, level - 1, fprime, cfg, flags, abort);
    }

    let gen = tower.gen(level);
    let ftilde: Vec<Elem> =
        fprime.iter().map(|x| x.coeff_at(v, m as usize)).collect::<Result<_>>()?;
    let lead = match gen.kind {
        GenKind::SigmaStar => {
            match solve_pt_inner(tower, level - 1, &ftilde, cfg, flags, abort)? {
                PtOutcome::Basis(b) => b,
                PtOutcome::NoFirstEntry => return Ok(PtOutcome::NoFirstEntry),
            }
        }
        GenKind::Pi => {
            let am = gen.alpha.pow_i64(m).unwrap();
            let minus_one = Elem::one().neg();
            solve_fplde_inner(tower, level - 1, (&minus_one, &am), &ftilde, cfg, flags)?
        }
    };
    if lead.rows.is_empty() {
        // only constants remain (possible at Pi levels only)
        let basis = constant_only_basis(n);
        if abort {
            return Ok(PtOutcome::NoFirstEntry);
        }
        return Ok(PtOutcome::Basis(basis));
    }
    let lead = first_row_reduce(&lead);
    if abort && lead.first_column_zero() {
        return Ok(PtOutcome::NoFirstEntry);
    }

    let tm = Elem::var(v).pow_i64(m).unwrap();
    let phi: Vec<Elem> = lead
        .rows
        .iter()
        .map(|row| {
            let mut acc = Elem::zero();
            for (c, fj) in row.coeffs.iter().zip(fprime) {
                acc = acc.add(&c.mul(fj));
            }
            let gt = row.g.mul(&tm);
            acc.sub(&tower.sigma(&gt).sub(&gt))
        })
        .collect();
    debug_assert!(phi.iter().all(|p| p.deg_at(v).unwrap() < m));

    let sub = match degree_reduction_rat_inner(tower, level, m - 1, &phi, cfg, flags, abort)? {
        PtOutcome::Basis(b) => b,
        PtOutcome::NoFirstEntry => return Ok(PtOutcome::NoFirstEntry),
    };
    Ok(PtOutcome::Basis(merge_reduction(&lead, &sub, &tm, n)))
}

/// Problem PT in a polynomial Sigma*-extension above `from_level`: the
/// denominator bound is trivially 1, so the pipeline never touches the
/// windowed machinery. Errors if the shape precondition fails.
pub fn solve_pt_poly(
    tower: &Tower,
    from_level: usize,
    f: &[Elem],
    cfg: &Config,
) -> Result<(SolutionBasis, Flags)> {
    if !tower.is_polynomial_sigma_tower(from_level) {
        return Err(Error::UnsupportedLevel { op: "solve_pt_poly", level: from_level });
    }
    if from_level < tower.height() {
        let v0 = tower.var_of_level(from_level + 1);
        for x in f {
            if !x.is_poly_in_vars_ge(v0) {
                return Err(Error::NotPolynomial {
                    level: tower.split_level(x),
                    what: tower.render_elem(x),
                });
            }
        }
    }
    solve_pt(tower, tower.height(), f, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linsolve::span_eq;
    use crate::tower::factorial_harmonic_tower;

    fn q(n: i64) -> Elem {
        Elem::from_i64(n)
    }

    /// f of the concrete telescoping instance: sigma((k^2+1) p h^2).
    pub fn concrete_summand(t: &Tower) -> Elem {
        let k = t.gen_elem(1);
        let p = t.gen_elem(2);
        let h = t.gen_elem(3);
        let ftilde = k.mul(&k).add(&Elem::one()).mul(&p).mul(&h).mul(&h);
        let f = t.sigma(&ftilde);
        // matches the closed form (k^2+2k+2) p (h(k+1)+1)^2 / (k+1)
        let k1 = k.add(&Elem::one());
        let built = k
            .mul(&k)
            .add(&k.mul(&q(2)))
            .add(&q(2))
            .mul(&p)
            .mul(&h.mul(&k1).add(&Elem::one()).pow_i64(2).unwrap())
            .div(&k1)
            .unwrap();
        assert_eq!(f, built);
        f
    }

    #[test]
    fn telescope_constant_one() {
        // f = (1) over Q(k): span {(1, k), (0, 1)}
        let t = factorial_harmonic_tower();
        let k = t.gen_elem(1);
        let (basis, _) = solve_pt(&t, 1, &[Elem::one()], &Config::default()).unwrap();
        let want = SolutionBasis::new(
            1,
            vec![
                SolutionRow::new(vec![q(1)], k.clone()),
                SolutionRow::new(vec![q(0)], q(1)),
            ],
        );
        assert!(span_eq(&t, &basis, &want), "got {basis:?}");
    }

    #[test]
    fn no_rational_telescoper_for_harmonic_summand() {
        // f = (1/(k+1)): only the constant row survives
        let t = factorial_harmonic_tower();
        let k = t.gen_elem(1);
        let f = Elem::one().div(&k.add(&Elem::one())).unwrap();
        let (basis, flags) = solve_pt(&t, 1, &[f], &Config::default()).unwrap();
        assert!(!flags.bound_limited);
        let want = SolutionBasis::new(1, vec![SolutionRow::new(vec![q(0)], q(1))]);
        assert!(span_eq(&t, &basis, &want), "got {basis:?}");
    }

    #[test]
    fn concrete_summand_has_no_telescoper() {
        let t = factorial_harmonic_tower();
        let f = concrete_summand(&t);
        let (basis, flags) = solve_pt(&t, 3, &[f], &Config::default()).unwrap();
        assert!(!flags.bound_limited);
        let want = SolutionBasis::new(1, vec![SolutionRow::new(vec![q(0)], q(1))]);
        assert!(span_eq(&t, &basis, &want), "got {basis:?}");
    }

    #[test]
    fn leading_subproblem_spans() {
        // sigma(g) - g = c1 (1+k)(2+2k+k^2) p + c2 (-3/(1+k)) over Q(k)(p):
        // span {(-1, 0, -k(k+1)p), (0, 0, 1)}
        let t = factorial_harmonic_tower();
        let k = t.gen_elem(1);
        let p = t.gen_elem(2);
        let k1 = k.add(&q(1));
        let f1 = k1.mul(&k.mul(&k).add(&k.mul(&q(2))).add(&q(2))).mul(&p);
        let f2 = q(-3).div(&k1).unwrap();
        let (basis, _) = solve_pt(&t, 2, &[f1, f2], &Config::default()).unwrap();
        let want = SolutionBasis::new(
            2,
            vec![
                SolutionRow::new(vec![q(-1), q(0)], k.mul(&k1).mul(&p).neg()),
                SolutionRow::new(vec![q(0), q(0)], q(1)),
            ],
        );
        assert!(span_eq(&t, &basis, &want), "got {basis:?}");
    }

    #[test]
    fn pt_poly_generator_increment() {
        // f = (sigma(h) - h) telescopes to h itself
        let t = factorial_harmonic_tower();
        let h = t.gen_elem(3);
        let f = t.sigma(&h).sub(&h);
        let (basis, _) = solve_pt_poly(&t, 2, &[f], &Config::default()).unwrap();
        let want = SolutionBasis::new(
            1,
            vec![
                SolutionRow::new(vec![q(1)], h.clone()),
                SolutionRow::new(vec![q(0)], q(1)),
            ],
        );
        assert!(span_eq(&t, &basis, &want), "got {basis:?}");
        // polynomial closure: both certificates are polynomial above level 2
        let v0 = t.var_of_level(3);
        assert!(basis.rows.iter().all(|r| r.g.is_poly_in_vars_ge(v0)));
    }

    #[test]
    fn pt_poly_zero_vector() {
        let t = factorial_harmonic_tower();
        let (basis, _) = solve_pt_poly(&t, 2, &[Elem::zero()], &Config::default()).unwrap();
        let want = SolutionBasis::new(
            1,
            vec![
                SolutionRow::new(vec![q(1)], q(0)),
                SolutionRow::new(vec![q(0)], q(1)),
            ],
        );
        assert!(span_eq(&t, &basis, &want));
    }

    #[test]
    fn pt_poly_rejects_bad_shape() {
        let t = factorial_harmonic_tower();
        let h = t.gen_elem(3);
        // above level 1 sits the Pi generator p: not a polynomial Sigma* tower
        assert!(solve_pt_poly(&t, 1, &[h.clone()], &Config::default()).is_err());
        // f with h in the denominator violates the polynomial precondition
        let f = Elem::one().div(&h).unwrap();
        assert!(solve_pt_poly(&t, 2, &[f], &Config::default()).is_err());
    }

    #[test]
    fn degree_reduction_m0_delegates() {
        // m = 0 hands the vector to the level below unchanged
        let t = factorial_harmonic_tower();
        let k = t.gen_elem(1);
        let f = Elem::one().div(&k.mul(&k.add(&q(1)))).unwrap();
        let (via_dr, _) = degree_reduction_rat(&t, 2, 0, &[f.clone()], &Config::default()).unwrap();
        let (direct, _) = solve_pt(&t, 1, &[f], &Config::default()).unwrap();
        assert!(span_eq(&t, &via_dr, &direct));
    }

    #[test]
    fn pt_agrees_with_fplde() {
        let t = factorial_harmonic_tower();
        let k = t.gen_elem(1);
        let p = t.gen_elem(2);
        let cases: Vec<Vec<Elem>> = vec![
            vec![k.mul(&p).mul(&q(2)), q(-2).div(&k.add(&q(1))).unwrap()],
            vec![p.clone(), p.mul(&k)],
            vec![Elem::one().div(&k).unwrap(), k.clone()],
        ];
        let cfg = Config::default();
        let neg = Elem::one().neg();
        let one = Elem::one();
        for f in cases {
            let lvl = f.iter().map(|x| t.split_level(x)).max().unwrap();
            let (a, _) = solve_pt(&t, lvl, &f, &cfg).unwrap();
            let (b, _) = crate::fplde::solve_fplde(&t, lvl, (&neg, &one), &f, &cfg).unwrap();
            assert!(span_eq(&t, &a, &b), "span mismatch for {f:?}");
        }
    }
}

#[cfg(test)]
pub(crate) use tests::concrete_summand;
