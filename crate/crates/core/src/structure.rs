//! Tower structure tools: construct Sigma*-extensions when telescoping
//! fails, detect and repair non-reduced extensions (moving each sum
//! generator's increment into the smallest possible subfield), and the
//! structural-theorem shortcut that telescopes ground-field elements with a
//! single constant-field solve.

use crate::arith::{subst_many, Elem};
use crate::error::{Error, Result};
use crate::refined::{first_entry_pt, reduced_pt};
use crate::tower::{GenKind, Tower};
use crate::{Config, Flags};

/// Outcome of trying to adjoin a sum with increment f.
#[derive(Clone, Debug)]
pub enum ExtendOutcome {
    /// sigma(g) - g = f already solvable in the tower.
    Telescoper(Elem),
    /// A new Sigma* generator t with sigma(t) = t + f.
    Extended(Tower),
}

/// Telescope f if possible; otherwise adjoin a Sigma* generator with
/// increment f (legitimate exactly when no telescoper exists, which is what
/// the first-entry solver decides). With incomplete bounds in play the
/// extension is flagged unverified instead of being refused.
pub fn try_sigma_star_extension(
    tower: &Tower,
    f: &Elem,
    name: &str,
    cfg: &Config,
) -> Result<(ExtendOutcome, Flags)> {
    let (fe, mut flags) = first_entry_pt(tower, tower.height(), &[f.clone()], cfg)?;
    match fe {
        Some(row) => {
            let g = row.g.div(&row.coeffs[0]).expect("first entry nonzero");
            debug_assert_eq!(tower.sigma(&g).sub(&g), *f);
            Ok((ExtendOutcome::Telescoper(g), flags))
        }
        None => {
            flags.unverified_extension |= flags.bound_limited;
            let ext = tower.extend(name, GenKind::SigmaStar, Elem::one(), f.clone())?;
            Ok((ExtendOutcome::Extended(ext), flags))
        }
    }
}

/// A Sigma* generator is reduced when its increment cannot be pushed into a
/// strictly smaller subfield: the reduced solution for beta keeps its psi at
/// beta's own level.
pub fn is_reduced_extension(tower: &Tower, level: usize, cfg: &Config) -> Result<(bool, Flags)> {
    let gen = tower.gen(level);
    if gen.kind != GenKind::SigmaStar {
        return Err(Error::InvalidGenerator {
            name: gen.name.clone(),
            reason: "reducedness is a Sigma* notion".into(),
        });
    }
    let beta = gen.beta.clone();
    let j = tower.split_level(&beta);
    if j == 0 {
        return Ok((true, Flags::default()));
    }
    let (sol, flags) = reduced_pt(tower, level - 1, &[beta], cfg)?;
    Ok((sol.psi_level >= j, flags))
}

/// One substitution of the isomorphism: the generator at `level` maps to
/// `image` (its replacement plus the absorbed certificate).
#[derive(Clone, Debug)]
pub struct IsoEntry {
    pub level: usize,
    pub var: u32,
    pub old_name: String,
    pub image: Elem,
}

/// The sigma-isomorphism produced by `transform_to_reduced`: generator
/// images per level (identity where untouched).
#[derive(Clone, Debug, Default)]
pub struct IsoMap {
    pub entries: Vec<IsoEntry>,
    nvars: usize,
}

impl IsoMap {
    /// Apply the isomorphism to an element of the original tower
    /// (simultaneous substitution of the generator images).
    pub fn apply(&self, e: &Elem) -> Elem {
        let mut images: Vec<Option<Elem>> = vec![None; self.nvars];
        for entry in &self.entries {
            images[entry.var as usize] = Some(entry.image.clone());
        }
        subst_many(e, &images)
    }

    pub fn is_identity(&self) -> bool {
        self.entries.is_empty()
    }

    /// Serializable audit form: old generator name -> image text.
    pub fn to_json(&self, reduced_tower: &Tower) -> serde_json::Value {
        serde_json::Value::Array(
            self.entries
                .iter()
                .map(|e| {
                    serde_json::json!({
                        "level": e.level,
                        "generator": e.old_name,
                        "image": reduced_tower.render_elem(&e.image),
                    })
                })
                .collect(),
        )
    }
}

/// Replace every non-reduced Sigma* generator bottom-up: a reduced solution
/// (psi, (c1, g)) for its increment beta yields a new generator s with
/// sigma(s) = s + psi/c1 and the image t = s + g/c1; higher generators are
/// rewritten through the substitution before they are examined themselves.
pub fn transform_to_reduced(tower: &Tower, cfg: &Config) -> Result<(Tower, IsoMap, Flags)> {
    let mut flags = Flags::default();
    let mut current = tower.clone();
    let mut entries: Vec<IsoEntry> = Vec::new();
    for level in 1..=tower.height() {
        let gen = current.gen(level).clone();
        if gen.kind != GenKind::SigmaStar {
            continue;
        }
        let j = current.split_level(&gen.beta);
        if j == 0 {
            continue;
        }
        let (sol, fl) = reduced_pt(&current, level - 1, &[gen.beta.clone()], cfg)?;
        flags.merge(fl);
        if sol.psi_level >= j {
            continue;
        }
        let c1inv = sol.coeffs[0].inv().expect("first entry nonzero");
        let new_beta = sol.psi.mul(&c1inv);
        let absorbed = sol.g.mul(&c1inv);
        let var = current.var_of_level(level);
        let image = Elem::var(var).add(&absorbed);
        let new_name = fresh_name(&current, &gen.name);
        // rebuild: levels below stay, this level gets the new increment,
        // higher generators are carried through the substitution
        let mut rebuilt = Tower::constant_field(
            &current.params().iter().map(|s| s.as_str()).collect::<Vec<_>>(),
        );
        for l in 1..level {
            let g = current.gen(l);
            rebuilt = rebuilt.extend(&g.name, g.kind, g.alpha.clone(), g.beta.clone())?;
        }
        rebuilt = rebuilt.extend(&new_name, GenKind::SigmaStar, Elem::one(), new_beta)?;
        for l in (level + 1)..=current.height() {
            let g = current.gen(l);
            rebuilt = rebuilt.extend(
                &g.name,
                g.kind,
                g.alpha.subst_var(var, &image),
                g.beta.subst_var(var, &image),
            )?;
        }
        current = rebuilt;
        entries.push(IsoEntry { level, var, old_name: gen.name.clone(), image });
    }
    let map = IsoMap { entries, nvars: tower.nvars() };
    Ok((current, map, flags))
}

fn fresh_name(tower: &Tower, base: &str) -> String {
    let candidate = format!("{base}_r");
    if tower.var_by_name(&candidate).is_none() {
        return candidate;
    }
    let mut i = 2;
    loop {
        let c = format!("{base}_r{i}");
        if tower.var_by_name(&c).is_none() {
            return c;
        }
        i += 1;
    }
}

/// Karr's structural shortcut in a reduced tower: a constant f telescopes
/// over the whole tower iff it is a constant combination of the ground-level
/// Sigma* increments, which one constant-field first-entry call decides.
/// The resulting certificate is g = (w - sum c_i t_i) / c.
pub fn structural_telescope(
    tower: &Tower,
    f: &Elem,
    cfg: &Config,
) -> Result<(Option<Elem>, Flags)> {
    if !tower.is_constant(f) {
        return Err(Error::LevelTooHigh { level: 0, what: tower.render_elem(f) });
    }
    let mut s_levels = Vec::new();
    let mut vec = vec![f.clone()];
    for level in 1..=tower.height() {
        let gen = tower.gen(level);
        if gen.kind == GenKind::SigmaStar && tower.is_constant(&gen.beta) {
            s_levels.push(level);
            vec.push(gen.beta.clone());
        }
    }
    let (fe, flags) = first_entry_pt(tower, 0, &vec, cfg)?;
    let Some(row) = fe else {
        return Ok((None, flags));
    };
    let c = row.coeffs[0].clone();
    let mut g = row.g.clone();
    for (ci, level) in row.coeffs[1..].iter().zip(&s_levels) {
        g = g.sub(&ci.mul(&tower.gen_elem(*level)));
    }
    let g = g.div(&c).expect("first entry nonzero");
    debug_assert_eq!(tower.sigma(&g).sub(&g), *f);
    Ok((Some(g), flags))
}

/// Theorem-1 sanity check usable once the solver stack exists: every Sigma*
/// increment must be non-telescopable one level below its generator.
pub fn check_sigma_star_validity(tower: &Tower, cfg: &Config) -> Result<Vec<bool>> {
    let mut out = Vec::new();
    for level in 1..=tower.height() {
        let gen = tower.gen(level);
        if gen.kind != GenKind::SigmaStar {
            out.push(true);
            continue;
        }
        let (fe, _) = first_entry_pt(tower, level - 1, &[gen.beta.clone()], cfg)?;
        out.push(fe.is_none());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q_ratio;
    use crate::pt::concrete_summand;
    use crate::tower::factorial_harmonic_tower;

    fn extended_tower() -> (Tower, Elem) {
        let t = factorial_harmonic_tower();
        let f = concrete_summand(&t);
        (t.extend("t", GenKind::SigmaStar, Elem::one(), f.clone()).unwrap(), f)
    }

    #[test]
    fn extension_when_no_telescoper() {
        let t = factorial_harmonic_tower();
        let f = concrete_summand(&t);
        let (out, flags) = try_sigma_star_extension(&t, &f, "t", &Config::default()).unwrap();
        assert!(!flags.unverified_extension);
        match out {
            ExtendOutcome::Extended(ext) => assert_eq!(ext.height(), 4),
            ExtendOutcome::Telescoper(_) => panic!("the concrete summand must not telescope"),
        }
        // the harmonic increment extends the rational tower the same way
        let base = Tower::rational(&[]);
        let k1 = base.gen_elem(1).add(&Elem::one());
        let beta = Elem::one().div(&k1).unwrap();
        let (out, _) = try_sigma_star_extension(&base, &beta, "h", &Config::default()).unwrap();
        assert!(matches!(out, ExtendOutcome::Extended(_)));
    }

    #[test]
    fn telescoper_when_increment_is_shift_difference() {
        let t = factorial_harmonic_tower();
        let h = t.gen_elem(3);
        let f = t.sigma(&h).sub(&h);
        let (out, _) = try_sigma_star_extension(&t, &f, "t", &Config::default()).unwrap();
        match out {
            ExtendOutcome::Telescoper(g) => assert_eq!(t.sigma(&g).sub(&g), f),
            ExtendOutcome::Extended(_) => panic!("sigma(h) - h telescopes to h"),
        }
    }

    #[test]
    fn reducedness_detection() {
        let (ext, _) = extended_tower();
        // the freshly adjoined generator is not reduced
        let (red, flags) = is_reduced_extension(&ext, 4, &Config::default()).unwrap();
        assert!(!red && !flags.bound_limited);
        // h has increment 1/(k+1) at level 1, already minimal
        let (red, _) = is_reduced_extension(&ext, 3, &Config::default()).unwrap();
        assert!(red);
        // the rational generator has a constant increment
        let (red, _) = is_reduced_extension(&ext, 1, &Config::default()).unwrap();
        assert!(red);
    }

    #[test]
    fn transform_concrete_extension() {
        let (ext, _) = extended_tower();
        let (reduced, iso, flags) = transform_to_reduced(&ext, &Config::default()).unwrap();
        assert!(!flags.bound_limited);
        assert_eq!(iso.entries.len(), 1);
        let k = reduced.gen_elem(1);
        let p = reduced.gen_elem(2);
        let h = reduced.gen_elem(3);
        let k1 = k.add(&Elem::one());
        // sigma(s) = s + (k+2)p/(k+1)
        let want_beta = k.add(&Elem::from_i64(2)).mul(&p).div(&k1).unwrap();
        assert_eq!(reduced.gen(4).beta, want_beta);
        // tau(t) = s + k(k+1) p h^2 - 2 h p
        let want_image = reduced
            .gen_elem(4)
            .add(&k.mul(&k1).mul(&p).mul(&h).mul(&h))
            .sub(&h.mul(&p).mul(&Elem::from_i64(2)));
        assert_eq!(iso.entries[0].image, want_image);
        // the replacement slot is a genuine generator rename
        assert_eq!(iso.entries[0].level, 4);
        // sigma-isomorphism property spot check
        let e = ext.gen_elem(4).mul(&ext.gen_elem(3)).add(&ext.gen_elem(2));
        assert_eq!(iso.apply(&ext.sigma(&e)), reduced.sigma(&iso.apply(&e)));
        // an already-reduced tower maps to itself
        let (same, iso2, _) = transform_to_reduced(&reduced, &Config::default()).unwrap();
        assert!(iso2.is_identity());
        assert!(same.is_prefix_of(&reduced) && reduced.is_prefix_of(&same));
    }

    #[test]
    fn structural_fast_path() {
        // reduced tower Q(k)(p)(h): S = {k} (beta = 1)
        let t = factorial_harmonic_tower();
        let f = Elem::from_q(q_ratio(5, 3));
        let (g, _) = structural_telescope(&t, &f, &Config::default()).unwrap();
        let g = g.unwrap();
        assert_eq!(t.sigma(&g).sub(&g), f);
        // beta itself telescopes to the generator
        let one = Elem::one();
        let (g, _) = structural_telescope(&t, &one, &Config::default()).unwrap();
        let g = g.unwrap();
        let k = t.gen_elem(1);
        assert!(t.is_constant(&g.sub(&k)), "g = k up to a constant");
    }

    #[test]
    fn sigma_star_validity_check() {
        let t = factorial_harmonic_tower();
        let ok = check_sigma_star_validity(&t, &Config::default()).unwrap();
        assert_eq!(ok, vec![true, true, true]);
    }
}
