//! One function per command; each returns a report or an error.

use std::collections::HashSet;

use num_traits::ToPrimitive;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use exactkit::abgrp::{FinAbGroup, GroupHom, Int, IntMatrix};
use exactkit::bimod::{check_biexact, Variable};
use exactkit::cat::{
    check_category_axioms, exact_sequences, is_exact_sequence, is_split_exact, kernel_of, AbCat, EnumOrder, ExactCategory,
    ExactSeq, Morphism,
};
use exactkit::kzero::{compare_k0, grothendieck_group, same_group};
use exactkit::sconstr::{enumerate_sp_diagrams, sample_sp_diagrams, straighten, SPDiagram};
use exactkit::semidirect::{
    classify_extension, dual_numbers_block_form, dual_numbers_extension, kernel_in_semidirect, normalize_sequence,
    pullback_along_epi, Classification, SemidirectCat, SplitExtension,
};
use exactkit::Error;

use crate::dsl::{Command, RunOptions};
use crate::env::{CategoryValue, Env};
use crate::error::CliError;

/// Level-3 diagrams sampled by `straighten` unless `--samples` says otherwise.
pub const DEFAULT_SAMPLES: usize = 100;
/// Examples echoed by `normalize --seed`.
const NORMALIZE_EXAMPLES: usize = 3;

pub struct Report {
    pub command: Command,
    pub target: String,
    pub options: RunOptions,
    pub passed: bool,
    pub payload: Value,
    pub witness: Option<Value>,
}

impl Report {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "command": self.command.name(),
            "target": self.target,
            "options": self.options,
            "status": if self.passed { "pass" } else { "fail" },
            "payload": self.payload,
        });
        if let Some(w) = &self.witness {
            v["witness"] = w.clone();
        }
        v
    }
}

pub fn int(x: &Int) -> Value {
    match x.to_i64() {
        Some(n) => json!(n),
        None => json!(x.to_string()),
    }
}

fn ints(xs: &[Int]) -> Value {
    Value::Array(xs.iter().map(int).collect())
}

fn group(g: &FinAbGroup) -> Value {
    ints(&g.invariant_factors())
}

fn matrix(m: &IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| ints(m.row(i))).collect())
}

fn morphism(cat: &AbCat, f: &Morphism) -> Value {
    json!({
        "source": cat.object_name(f.source),
        "target": cat.object_name(f.target),
        "coords": ints(&cat.hom(f.source, f.target).canonical(&f.coords)),
    })
}

fn sequence(cat: &AbCat, s: &ExactSeq) -> Value {
    json!({ "i": morphism(cat, &s.i), "q": morphism(cat, &s.q) })
}

fn diagram(d: &SPDiagram) -> Value {
    let cat = d.cat();
    json!({
        "level": d.level(),
        "covers": d
            .cover_list()
            .into_iter()
            .map(|((r, t), f)| json!({ "from": [r.0, r.1], "to": [t.0, t.1], "map": morphism(cat, f) }))
            .collect::<Vec<_>>(),
    })
}

fn semidirect<'a>(env: &'a Env, name: &str, command: Command) -> Result<&'a SemidirectCat, CliError> {
    match &env.categories[name] {
        CategoryValue::Semidirect(sd) => Ok(sd),
        CategoryValue::Free(_) => Err(CliError::Usage(format!(
            "{} needs a semidirect product, `{name}` is a category of free modules",
            command.name()
        ))),
    }
}

pub struct Settings {
    pub budget: usize,
}

pub fn run(env: &Env, command: Command, target: &str, options: &RunOptions, settings: &Settings) -> Result<Report, CliError> {
    let budget = settings.budget;
    let (passed, payload, witness) = match command {
        Command::CheckAxioms => check_axioms(env.categories[target].cat()),
        Command::CheckBiexact => biexact(env, target, budget)?,
        Command::CheckExactStructure => exact_structure(&env.categories[target], budget)?,
        Command::Classify => classify(&env.categories[target], target)?,
        Command::Normalize => normalize(semidirect(env, target, command)?, options, budget)?,
        Command::Straighten => straighten_cmd(semidirect(env, target, command)?, options, budget)?,
        Command::K0 => k0(env.categories[target].exact().as_ref(), budget)?,
        Command::CompareK0 => compare(semidirect(env, target, command)?, budget)?,
    };
    Ok(Report {
        command,
        target: target.to_string(),
        options: options.clone(),
        passed,
        payload,
        witness,
    })
}

type Outcome = (bool, Value, Option<Value>);

fn check_axioms(cat: &AbCat) -> Outcome {
    let r = check_category_axioms(cat);
    let witness = r.violations.first().map(|v| {
        json!({
            "law": v.law,
            "objects": v.objects.iter().map(|&o| cat.object_name(o)).collect::<Vec<_>>(),
            "generators": v.generators,
        })
    });
    let payload = json!({
        "objects": cat.object_names(),
        "checked": r.checked,
        "violations": r.violations.len(),
    });
    (r.passed(), payload, witness)
}

fn biexact(env: &Env, name: &str, budget: usize) -> Result<Outcome, CliError> {
    let bm = &env.bimodules[name];
    let e = env.categories[&bm.category].exact();
    let cat = e.cat();
    let witnesses = exact_sequences(e.as_ref(), EnumOrder::MonoFirst, budget)?;
    let r = check_biexact(&bm.bimodule, e.as_ref(), &witnesses)?;
    let values: Vec<Value> = cat
        .objects()
        .map(|a| Value::Array(cat.objects().map(|b| group(bm.bimodule.value(a, b))).collect()))
        .collect();
    let witness = r.failures.first().map(|f| {
        json!({
            "sequence": sequence(cat, &witnesses[f.sequence]),
            "object": cat.object_name(f.object),
            "variable": match f.variable { Variable::First => "first", Variable::Second => "second" },
        })
    });
    let payload = json!({
        "category": bm.category,
        "values": values,
        "witness_sequences": witnesses.len(),
        "checked": r.checked,
        "failures": r.failures.len(),
    });
    Ok((r.passed(), payload, witness))
}

fn exact_structure(value: &CategoryValue, budget: usize) -> Result<Outcome, CliError> {
    let e = value.exact();
    let cat = e.cat();
    let mono = exact_sequences(e.as_ref(), EnumOrder::MonoFirst, budget)?;
    let epi = exact_sequences(e.as_ref(), EnumOrder::EpiFirst, budget)?;
    let keys = |s: &[ExactSeq]| s.iter().map(|x| x.key(cat)).collect::<Vec<_>>();
    let agree = keys(&mono) == keys(&epi);
    let mut witness = None;
    let mut fail = |w: Value| {
        if witness.is_none() {
            witness = Some(w);
        }
    };
    if !agree {
        fail(json!({ "problem": "mono-first and epi-first enumerations differ" }));
    }
    let mut seen = HashSet::new();
    let mut deflations = Vec::new();
    let mut split = 0;
    for s in &mono {
        if !is_exact_sequence(e.as_ref(), &s.i, &s.q)? {
            fail(json!({ "problem": "enumerated sequence is not exact", "sequence": sequence(cat, s) }));
        }
        if is_split_exact(cat, &s.i, &s.q) {
            split += 1;
        }
        if seen.insert(cat.key(&s.q)) {
            deflations.push(s.q.clone());
        }
    }
    let (mut squares, mut outside) = (0usize, 0usize);
    for q in &deflations {
        match value {
            CategoryValue::Free(_) => match kernel_of(e.as_ref(), q) {
                Some(k) if e.is_exact(&k, q) => {}
                _ => fail(json!({ "problem": "deflation has no exact kernel", "deflation": morphism(cat, q) })),
            },
            CategoryValue::Semidirect(sd) => {
                let k = kernel_in_semidirect(sd, q)?;
                if !sd.is_exact(&k.kernel, q) || !cat.objects().all(|d| k.mediator_is_unique(sd, d)) {
                    fail(json!({ "problem": "kernel fails its universal property", "deflation": morphism(cat, q) }));
                }
                for d in cat.objects() {
                    let mut along = vec![cat.zero_morphism(d, q.target)];
                    along.extend((0..cat.hom(d, q.target).generator_count()).map(|u| cat.generator(d, q.target, u)));
                    for g in along {
                        let sq = match pullback_along_epi(sd, &g, q) {
                            Ok(sq) => sq,
                            Err(Error::OutsideModel(_)) => {
                                outside += 1;
                                continue;
                            }
                            Err(err) => return Err(err.into()),
                        };
                        squares += 1;
                        if !sq.commutes(sd) || !cat.objects().all(|x| sq.mediator_is_unique(sd, x)) {
                            fail(json!({
                                "problem": "pullback square fails its universal property",
                                "deflation": morphism(cat, q),
                                "along": morphism(cat, &g),
                            }));
                        }
                    }
                }
            }
        }
    }
    let payload = json!({
        "sequences": mono.len(),
        "split_sequences": split,
        "enumerations_agree": agree,
        "deflations": deflations.len(),
        "pullback_squares": squares,
        "pullbacks_outside_model": outside,
    });
    Ok((witness.is_none(), payload, witness))
}

fn kernel_orders(cl: &Classification) -> Value {
    let cat = cl.semidirect.base_cat();
    Value::Array(
        cat.objects()
            .map(|a| Value::Array(cat.objects().map(|b| group(cl.kernel.value(a, b))).collect()))
            .collect(),
    )
}

fn classify(value: &CategoryValue, name: &str) -> Result<Outcome, CliError> {
    let (ext, target, block): (SplitExtension, std::sync::Arc<dyn ExactCategory>, Option<_>) = match value {
        CategoryValue::Semidirect(sd) => (sd.canonical_extension()?, sd.clone(), None),
        CategoryValue::Free(c) => {
            let (big, _, ext) = dual_numbers_extension(c.ring(), c.max_rank()).map_err(|e| match e {
                Error::Invalid(m) => CliError::Usage(format!("`{name}`: {m}")),
                other => other.into(),
            })?;
            (ext, big.exact(), Some(big))
        }
    };
    let cl = classify_extension(&ext)?;
    let round_trip = cl.round_trip_failure();
    let exactness = cl.preserves_and_reflects_exactness(target.as_ref())?;
    let mut witness = None;
    if let Some((a, b)) = round_trip {
        let cat = cl.semidirect.base_cat();
        witness = Some(json!({ "problem": "round trip fails", "objects": [cat.object_name(a), cat.object_name(b)] }));
    } else if !exactness {
        witness = Some(json!({ "problem": "exact sequences do not correspond" }));
    }
    let mut payload = json!({
        "kernel_bimodule": kernel_orders(&cl),
        "round_trip": round_trip.is_none(),
        "exactness_preserved_and_reflected": exactness,
    });
    if let Some(big) = block {
        let cat = big.cat();
        let mut checked = 0;
        for r in cat.objects() {
            for s in cat.objects() {
                for u in 0..cat.hom(r, s).generator_count() {
                    let f = cat.generator(r, s, u);
                    let (actual, expected) = dual_numbers_block_form(&big, &f)?;
                    if actual != expected && witness.is_none() {
                        witness = Some(json!({ "problem": "not in block form", "morphism": morphism(cat, &f) }));
                    }
                    checked += 1;
                }
            }
        }
        payload["block_form_generators"] = json!(checked);
    }
    Ok((witness.is_none(), payload, witness))
}

fn normalize(sd: &SemidirectCat, options: &RunOptions, budget: usize) -> Result<Outcome, CliError> {
    let cat = sd.semidirect_cat();
    let seqs = exact_sequences(sd, EnumOrder::MonoFirst, budget)?;
    let mut witness = None;
    let mut xs = Vec::with_capacity(seqs.len());
    for s in &seqs {
        let nz = normalize_sequence(sd, &s.i, &s.q)?;
        if witness.is_none() && !(nz.solves(sd, &s.i, &s.q) && nz.verify(sd, &s.i, &s.q)) {
            witness = Some(json!({ "sequence": sequence(cat, s), "x": ints(&nz.x) }));
        }
        xs.push(nz.x);
    }
    let mut payload = json!({ "sequences": seqs.len() });
    if let Some(seed) = options.seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut picked = sample(&mut rng, seqs.len(), NORMALIZE_EXAMPLES.min(seqs.len())).into_vec();
        picked.sort_unstable();
        payload["examples"] = Value::Array(
            picked
                .into_iter()
                .map(|k| {
                    let b = seqs[k].i.target;
                    json!({ "sequence": sequence(cat, &seqs[k]), "x": ints(&sd.bimodule().value(b, b).canonical(&xs[k])) })
                })
                .collect(),
        );
    }
    Ok((witness.is_none(), payload, witness))
}

fn straighten_cmd(sd: &SemidirectCat, options: &RunOptions, budget: usize) -> Result<Outcome, CliError> {
    let p = options.p.unwrap_or(2);
    let diagrams = match p {
        2 => enumerate_sp_diagrams(sd, 2, budget)?,
        3 => {
            let mut rng = ChaCha8Rng::seed_from_u64(options.seed.unwrap_or(0));
            sample_sp_diagrams(sd, 3, options.samples.unwrap_or(DEFAULT_SAMPLES), budget, &mut rng)?
        }
        _ => return Err(CliError::Usage(format!("straighten supports --p 2 or --p 3, not {p}"))),
    };
    let (mut equations, mut agrees) = (0, true);
    let mut witness = None;
    for d in &diagrams {
        let st = match straighten(sd, d) {
            Ok(st) => st,
            Err(Error::Unsolvable(m)) => {
                witness.get_or_insert(json!({ "problem": m, "diagram": diagram(d) }));
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let (n, failures) = st.naturality_failures(sd, d, true)?;
        equations += n;
        if let Some((r, t)) = failures.first() {
            witness.get_or_insert(json!({ "problem": "naturality fails", "from": [r.0, r.1], "to": [t.0, t.1], "diagram": diagram(d) }));
        }
        if p == 2 {
            let nz = normalize_sequence(sd, d.cover((0, 1), (0, 2)), d.cover((0, 2), (1, 2)))?;
            if st.get((0, 2)) != nz.x.as_slice() {
                agrees = false;
                witness.get_or_insert(json!({ "problem": "differs from normalize", "diagram": diagram(d) }));
            }
        }
    }
    let mut payload = json!({ "p": p, "diagrams": diagrams.len(), "equations": equations });
    if p == 2 {
        payload["agrees_with_normalize"] = json!(agrees);
    }
    Ok((witness.is_none(), payload, witness))
}

fn k0(e: &dyn ExactCategory, budget: usize) -> Result<Outcome, CliError> {
    let cat = e.cat();
    let k = grothendieck_group(e, EnumOrder::MonoFirst, budget)?;
    let epi = grothendieck_group(e, EnumOrder::EpiFirst, budget)?;
    let agree = same_group(&k, &epi);
    let classes: Vec<Value> = k
        .generators
        .iter()
        .enumerate()
        .map(|(c, &rep)| {
            json!({
                "representative": cat.object_name(rep),
                "objects": cat.objects().filter(|&a| k.class_of[a] == c).map(|a| cat.object_name(a)).collect::<Vec<_>>(),
            })
        })
        .collect();
    let class_map: serde_json::Map<String, Value> = cat
        .objects()
        .map(|a| (cat.object_name(a).to_string(), ints(&k.group.canonical(&k.class_map[a]))))
        .collect();
    let payload = json!({
        "invariant_factors": group(&k.group),
        "classes": classes,
        "class_map": class_map,
        "sequences": k.sequences,
        "relations": k.relations.cols(),
        "enumerations_agree": agree,
    });
    let witness = (!agree).then(|| json!({ "problem": "mono-first and epi-first presentations differ" }));
    Ok((agree, payload, witness))
}

fn hom(h: &GroupHom) -> Value {
    json!({ "source": group(h.source()), "target": group(h.target()), "matrix": matrix(h.matrix()) })
}

fn compare(sd: &SemidirectCat, budget: usize) -> Result<Outcome, CliError> {
    let mono = compare_k0(sd, EnumOrder::MonoFirst, budget)?;
    let epi = compare_k0(sd, EnumOrder::EpiFirst, budget)?;
    let agree = same_group(&mono.source, &epi.source) && same_group(&mono.target, &epi.target);
    let passed = mono.is_isomorphism && mono.section_is_inverse && agree;
    let payload = json!({
        "source": group(&mono.source.group),
        "target": group(&mono.target.group),
        "induced": hom(&mono.induced),
        "section": hom(&mono.section),
        "is_isomorphism": mono.is_isomorphism,
        "section_is_inverse": mono.section_is_inverse,
        "enumerations_agree": agree,
    });
    let witness = (!passed).then(|| {
        json!({
            "problem": if !agree { "mono-first and epi-first presentations differ" } else { "K0(p) is not inverse to K0(s)" },
        })
    });
    Ok((passed, payload, witness))
}
