use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use galtour::dissociation::{
    composition_tower_general, elevation_tower, equivalence_general, intourability_field,
    is_galsimple, is_galtourable, is_simple_ext, schreier_refine, schreier_refine_strict,
};
use galtour::galois::{FieldRef, GaloisContext};
use galtour::oracle::agreement_matrix;
use galtour::par::Exec;
use galtour::permgroup::{AbstractGroup, Bounds};
use galtour::presets;
use galtour::towers::{equivalence_witness, Tower};
use galtour::{Error, Result};

/// Field towers, galtourability and intourability fields of finite extensions.
#[derive(Parser)]
#[command(name = "galtour", version)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args)]
struct Common {
    /// Preset selector (radical:a=2,n=6, cyclo-radical:…, selmer-serre:n=5,
    /// group:A4) or path to a JSON instance file.
    instance: String,
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
    /// Largest group order whose subgroup lattice may be enumerated.
    #[arg(long, value_name = "N")]
    bound: Option<usize>,
}

impl Common {
    fn bounds(&self) -> Bounds {
        let mut b = Bounds::default();
        if let Some(n) = self.bound {
            b.enumeration = n;
        }
        b
    }

    fn load(&self) -> Result<GaloisContext> {
        presets::load(&self.instance, self.bounds())
    }
}

#[derive(Subcommand)]
enum Verb {
    /// Per-field degree, Galois/simple/galsimple/galtourable verdicts and M(F/K).
    Analyze {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "NAME")]
        field: Option<String>,
    },
    /// The intourability field M(L/K) and the tourability degree.
    MField {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "NAME")]
        field: Option<String>,
    },
    /// Properties of a single tower.
    TowerCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "JSON")]
        tower: String,
    },
    /// Equivalent Galois refinements of two Galois towers.
    Refine {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "JSON", num_args = 1, required = true)]
        tower: Vec<String>,
        /// Pass to the strict associated towers.
        #[arg(long)]
        strict: bool,
    },
    /// A composition tower of L/K.
    Compose {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "NAME")]
        field: Option<String>,
    },
    /// The elevation tower of a tower and its induced tower.
    Elevate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "JSON")]
        tower: String,
    },
    /// Whether two towers are equivalent.
    CheckEquiv {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "JSON", num_args = 1, required = true)]
        tower: Vec<String>,
    },
    /// The field lattice, optionally written as a DOT file.
    Lattice {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
    },
    /// Oracle agreement matrix over the given instances (default: all shipped).
    Oracle {
        instances: Vec<String>,
        #[arg(long)]
        json: bool,
        #[arg(long, value_name = "N")]
        bound: Option<usize>,
        /// Largest tower height in the refinement comparison.
        #[arg(long, default_value_t = 4)]
        max_height: usize,
        /// Run instances one after another.
        #[arg(long)]
        sequential: bool,
    },
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn emit(json: bool, value: Value, text: String) {
    if json {
        println!("{}", serde_json::to_string_pretty(&value).expect("serialisable"));
    } else {
        print!("{text}");
    }
}

fn target(ctx: &GaloisContext, field: &Option<String>) -> Result<FieldRef> {
    match field {
        Some(name) => ctx.field(name),
        None => Ok(ctx.distinguished()),
    }
}

fn group_label(g: &AbstractGroup) -> String {
    let n = g.order();
    let stats = g.order_statistics();
    if stats.last() == Some(&n) {
        return format!("C{n}");
    }
    match n {
        4 => "V4".into(),
        6 => "S3".into(),
        _ => format!("order {n}, element orders {stats:?}"),
    }
}

fn field_report(ctx: &GaloisContext, f: FieldRef) -> Result<(Value, String)> {
    let k = ctx.base();
    let m = intourability_field(ctx, f, k)?;
    let v = json!({
        "field": ctx.name(f),
        "degree": ctx.degree(f, k)?,
        "simple": is_simple_ext(ctx, f, k)?,
        "galois": ctx.is_galois(f, k)?,
        "galsimple": is_galsimple(ctx, f, k)?,
        "galtourable": is_galtourable(ctx, f, k)?,
        "M": ctx.name(m.m),
        "tour_degree": [m.degrees.gal, m.degrees.int],
    });
    let text = format!(
        "{}: degree: {}, simple: {}, galois: {}, galsimple: {}, galtourable: {}, M: {}, tour-degree: ({},{})\n",
        ctx.name(f),
        v["degree"],
        yes(v["simple"] == true),
        yes(v["galois"] == true),
        yes(v["galsimple"] == true),
        yes(v["galtourable"] == true),
        ctx.name(m.m),
        m.degrees.gal,
        m.degrees.int
    );
    Ok((v, text))
}

fn tower_json(t: &Tower<'_>) -> Value {
    json!(t.names())
}

fn parse_towers<'c>(ctx: &'c GaloisContext, texts: &[String]) -> Result<(Tower<'c>, Tower<'c>)> {
    match texts {
        [a, b] => Ok((Tower::parse_json(ctx, a)?, Tower::parse_json(ctx, b)?)),
        _ => Err(Error::Parse(format!("expected exactly two --tower values, got {}", texts.len()))),
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.verb {
        Verb::Analyze { common, field } => {
            let ctx = common.load()?;
            let fields: Vec<FieldRef> = match &field {
                Some(name) => vec![ctx.field(name)?],
                None => {
                    let mut fs: Vec<FieldRef> = ctx.named_fields().values().copied().collect();
                    fs.push(ctx.distinguished());
                    fs.sort();
                    fs.dedup();
                    fs.into_iter().rev().filter(|&f| f != ctx.base()).collect()
                }
            };
            let mut values = Vec::new();
            let mut text = String::new();
            for notes in ctx.notes() {
                text.push_str(&format!("note: {notes}\n"));
            }
            for f in fields {
                let (v, t) = field_report(&ctx, f)?;
                values.push(v);
                text.push_str(&t);
            }
            emit(
                common.json,
                json!({"instance": common.instance, "notes": ctx.notes(), "fields": values}),
                text,
            );
        }
        Verb::MField { common, field } => {
            let ctx = common.load()?;
            let l = target(&ctx, &field)?;
            let rep = intourability_field(&ctx, l, ctx.base())?;
            let text = format!(
                "L: {}\nM: {}\ntour-degree: ({},{})\nL/M: {}\nwitness: {}\n",
                ctx.name(l),
                ctx.name(rep.m),
                rep.degrees.gal,
                rep.degrees.int,
                rep.sub_kind.as_str(),
                Tower::new(&ctx, rep.witness_tower.clone())?.render()
            );
            emit(common.json, rep.to_json(&ctx), text);
        }
        Verb::TowerCheck { common, tower } => {
            let ctx = common.load()?;
            let t = Tower::parse_json(&ctx, &tower)?;
            let v = json!({
                "tower": tower_json(&t),
                "height": t.height(),
                "strict": t.is_strict(),
                "galois": t.is_galois_tower(),
                "galtourable": t.is_galtourable_tower(),
                "first_non_galois_marche": t.first_non_galois_marche(),
            });
            let mut text = format!(
                "{}\nheight: {}, strict: {}, galois: {}, galtourable: {}\n",
                t.render(),
                t.height(),
                yes(t.is_strict()),
                yes(t.is_galois_tower()),
                yes(t.is_galtourable_tower())
            );
            if let Some(i) = t.first_non_galois_marche() {
                text.push_str(&format!("first non-Galois marche: {i}\n"));
            }
            emit(common.json, v, text);
        }
        Verb::Refine { common, tower, strict } => {
            let ctx = common.load()?;
            let (t1, t2) = parse_towers(&ctx, &tower)?;
            let r = if strict {
                schreier_refine_strict(&t1, &t2)?
            } else {
                schreier_refine(&t1, &t2)?
            };
            let g1 = r.refined1.marche_groups()?;
            let classes: Vec<String> = g1.iter().map(group_label).collect();
            let v = json!({
                "refined1": tower_json(&r.refined1),
                "refined2": tower_json(&r.refined2),
                "sigma": r.witness.sigma,
                "marche_classes": classes,
            });
            let mut text = format!(
                "refined 1: {}\nrefined 2: {}\nsigma: {}\n",
                r.refined1.render(),
                r.refined2.render(),
                r.witness.sigma_line()
            );
            for (i, c) in classes.iter().enumerate() {
                text.push_str(&format!("marche {} -> {}: {c}\n", i + 1, r.witness.sigma[i]));
            }
            emit(common.json, v, text);
        }
        Verb::Compose { common, field } => {
            let ctx = common.load()?;
            let l = target(&ctx, &field)?;
            let t = composition_tower_general(&ctx, l, ctx.base())?;
            emit(common.json, json!({"tower": tower_json(&t)}), format!("{}\n", t.render()));
        }
        Verb::Elevate { common, tower } => {
            let ctx = common.load()?;
            let t = Tower::parse_json(&ctx, &tower)?;
            let (m, induced) = elevation_tower(&ctx, &t)?;
            emit(
                common.json,
                json!({"elevation": tower_json(&m), "induced": tower_json(&induced)}),
                format!(
                    "elevation: {}\ninduced: {}\n",
                    m.names().join(", "),
                    induced.names().join(", ")
                ),
            );
        }
        Verb::CheckEquiv { common, tower } => {
            let ctx = common.load()?;
            let (t1, t2) = parse_towers(&ctx, &tower)?;
            let w = if t1.is_galois_tower() && t2.is_galois_tower() {
                equivalence_witness(&t1, &t2)?
            } else {
                equivalence_general(&ctx, &t1, &t2)?
            };
            let text = match &w {
                Some(w) => format!("equivalent: yes\nsigma: {}\n", w.sigma_line()),
                None => "equivalent: no\n".to_string(),
            };
            emit(
                common.json,
                json!({"equivalent": w.is_some(), "sigma": w.as_ref().map(|w| &w.sigma)}),
                text,
            );
        }
        Verb::Lattice { common, dot } => {
            let ctx = common.load()?;
            if let Some(path) = &dot {
                std::fs::write(path, ctx.to_dot())?;
            }
            let base = ctx.base();
            let mut fields = Vec::new();
            let mut text = String::new();
            for f in ctx.fields().rev() {
                let d = ctx.degree(f, base)?;
                fields.push(json!({"field": ctx.name(f), "degree": d}));
                text.push_str(&format!("{} [{}]\n", ctx.name(f), d));
            }
            let covers: Vec<Value> = ctx
                .covering_pairs()
                .into_iter()
                .map(|(a, b)| {
                    let g = ctx.is_galois(b, a).unwrap_or(false);
                    text.push_str(&format!(
                        "{} {} {}\n",
                        ctx.name(a),
                        if g { "⊴" } else { "≤" },
                        ctx.name(b)
                    ));
                    json!({"lower": ctx.name(a), "upper": ctx.name(b), "galois": g})
                })
                .collect();
            emit(common.json, json!({"fields": fields, "covers": covers}), text);
        }
        Verb::Oracle {
            instances,
            json,
            bound,
            max_height,
            sequential,
        } => {
            let mut bounds = Bounds::default();
            if let Some(n) = bound {
                bounds.enumeration = n;
            }
            let selectors: Vec<&str> = if instances.is_empty() {
                presets::SHIPPED.to_vec()
            } else {
                instances.iter().map(String::as_str).collect()
            };
            let exec = if sequential { Exec::Sequential } else { Exec::Parallel };
            let matrix = agreement_matrix(&selectors, bounds, max_height, exec)?;
            let mut text = String::new();
            for r in &matrix.reports {
                text.push_str(&format!(
                    "{:<28} {:<22} {} ({} checks)\n",
                    r.instance,
                    r.operation,
                    if r.agreement { "agree" } else { "DISAGREE" },
                    r.checked
                ));
                if let Some(cx) = &r.counterexample {
                    text.push_str(&format!("    counterexample: {cx}\n"));
                }
            }
            emit(json, matrix.to_json(), text);
            return Ok(matrix.all_agree());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        // a disagreement is a bug in one of the two implementations
        Ok(false) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_internal() { 3 } else { 2 })
        }
    }
}
