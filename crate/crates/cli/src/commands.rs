use std::io::Write;
use std::path::Path;

use mutfan::exchange::mutation_class;
use mutfan::fanviz::{approximate_fan, write_svg, RenderOptions};
use mutfan::gvec::g_vector_fan;
use mutfan::io::{self, one_based};
use mutfan::mutmap::{check_b_coherent_with, eta_seq, eta_seq_inverse, CoherenceOptions, CoherenceVerdict};
use mutfan::pattern::{detect_period, walk_pattern, Seed};
use mutfan::rank2::{row_label, universal_rank2};
use mutfan::scalar::parse_rational;
use mutfan::specialize::{solve_specialization, verify_specialization_conditions, SpecializationProblem};
use mutfan::{int, ExtendedExchangeMatrix, RatVec};
use serde_json::{json, Map, Value};

use crate::{CliError, Command, Outcome, UniversalKind};

type Result<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn load_matrix(path: &Path) -> Result<ExtendedExchangeMatrix> {
    io::parse_matrix(&read(path)?).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// Converts 1-based command-line indices to 0-based ones.
fn zero_based(seq: &[usize], n: usize) -> Result<Vec<usize>> {
    seq.iter()
        .map(|&k| {
            if k == 0 || k > n {
                Err(CliError::Usage(format!("index {k} is out of range 1..={n}")))
            } else {
                Ok(k - 1)
            }
        })
        .collect()
}

fn parse_vector(s: &str) -> Result<RatVec> {
    s.split(',')
        .map(|t| parse_rational(t.trim()).map_err(|e| CliError::Usage(e.to_string())))
        .collect()
}

fn emit(out: &mut impl Write, v: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(v).expect("json values serialize");
    writeln!(out, "{text}").map_err(|source| CliError::Io { path: "<stdout>".into(), source })
}

fn emit_text(out: &mut impl Write, s: &str) -> Result<()> {
    writeln!(out, "{s}").map_err(|source| CliError::Io { path: "<stdout>".into(), source })
}

pub fn run(cmd: &Command, out: &mut impl Write) -> Result<Outcome> {
    match cmd {
        Command::Mutate { matrix, k } => {
            let m = load_matrix(matrix)?;
            let seq = zero_based(k, m.n())?;
            emit(out, &io::matrix_to_json(&m.mutate_seq(&seq)?))?;
        }
        Command::Class { matrix, cap } => {
            let m = load_matrix(matrix)?;
            let class = mutation_class(m.base(), *cap);
            let doc = json!({
                "complete": class.complete,
                "count": class.matrices.len(),
                "count_up_to_permutation": class.count_up_to_permutation(),
                "matrices": class.matrices.iter().map(|b| io::int_matrix_to_json(b.rows())).collect::<Vec<_>>(),
            });
            emit(out, &doc)?;
            if !class.complete {
                eprintln!("warning: class enumeration truncated at {cap} matrices");
            }
        }
        Command::Eta { matrix, seq, vector, inverse } => {
            let m = load_matrix(matrix)?;
            let seq = zero_based(seq, m.n())?;
            let v = parse_vector(vector)?;
            let image = if *inverse { eta_seq_inverse(m.base(), &seq, &v)? } else { eta_seq(m.base(), &seq, &v)? };
            emit(out, &io::vector_to_json(&image))?;
        }
        Command::Coherent { matrix, relation, depth, verify_shortcut } => {
            let m = load_matrix(matrix)?;
            let rel = io::parse_relation(&read(relation)?)
                .map_err(|e| CliError::Usage(format!("{}: {e}", relation.display())))?;
            let opts = CoherenceOptions { verify_shortcut: *verify_shortcut };
            match check_b_coherent_with(m.base(), &rel, depth.depth, opts)? {
                CoherenceVerdict::HoldsToDepth(d) => emit(out, &json!({ "verdict": "holds", "depth": d }))?,
                CoherenceVerdict::RefutedAt { sequence, condition, coordinate } => {
                    emit(
                        out,
                        &json!({
                            "verdict": "refuted",
                            "seq": one_based(&sequence),
                            "condition": format!("{condition:?}").to_lowercase(),
                            "j": coordinate + 1,
                        }),
                    )?;
                    return Ok(Outcome::Refuted);
                }
            }
        }
        Command::Gvec { matrix, depth, no_transpose } => {
            let m = load_matrix(matrix)?;
            let b = if *no_transpose { m.base().clone() } else { m.base().transpose() };
            let fan = g_vector_fan(&b, depth.depth)?;
            let rows: Map<String, Value> = fan
                .vectors()
                .iter()
                .enumerate()
                .map(|(i, v)| (row_label(i), io::int_vector_to_json(v)))
                .collect();
            let mut doc = io::matrix_to_json(&ExtendedExchangeMatrix::new(m.base().clone(), Vec::<(String, RatVec)>::new())?);
            doc["rows"] = Value::Object(rows);
            doc["complete"] = json!(!fan.truncated);
            emit(out, &doc)?;
        }
        Command::Universal { kind: UniversalKind::Rank2 { a, b, count, limit_exact } } => {
            let u = universal_rank2(&int(*a), &int(*b), *count)?;
            let mut doc = io::matrix_to_json(&u.extended());
            if *limit_exact {
                doc["limit_rays"] = Value::Array(
                    u.limit_rows
                        .iter()
                        .map(|r| Value::Array(r.iter().map(|q| json!(q.to_string())).collect()))
                        .collect(),
                );
            }
            emit(out, &doc)?;
        }
        Command::Specialize { universal, target, depth, walk_depth, nonnegative } => {
            let problem = SpecializationProblem::new(load_matrix(universal)?, load_matrix(target)?, depth.depth)?
                .with_nonnegative(*nonnegative);
            let sol = solve_specialization(&problem)?;
            let report = verify_specialization_conditions(&sol, &problem, walk_depth.unwrap_or(depth.depth))?;
            let mut doc = io::specialization_to_json(&sol);
            doc["verification"] = io::verification_to_json(&report);
            emit(out, &doc)?;
            if !report.is_ok() {
                return Ok(Outcome::Refuted);
            }
        }
        Command::Pattern { matrix, seq, period, max_steps } => {
            let m = load_matrix(matrix)?;
            let seq = zero_based(seq, m.n())?;
            let seed = Seed::initial(m);
            if *period {
                if seq.is_empty() {
                    return Err(CliError::Usage("--period needs a nonempty --seq".into()));
                }
                match detect_period(&seed, &seq, *max_steps)? {
                    Some(p) => emit_text(out, &format!("period: {p}"))?,
                    None => emit_text(out, &format!("period: none within {max_steps} steps"))?,
                }
            } else {
                for (t, s) in walk_pattern(&seed, &seq)?.iter().enumerate() {
                    emit_text(out, &format!("t{t}:\n{s}\n"))?;
                }
            }
        }
        Command::Fan { matrix, depth, svg } => {
            let m = load_matrix(matrix)?;
            let fan = approximate_fan(m.base(), depth.depth)?;
            if let Some(path) = svg {
                write_svg(&fan, &RenderOptions::default(), path)?;
            }
            let mut doc = json!({ "depth": fan.depth, "pieces": fan.wall_count(), "walls": io::walls_to_json(&fan) });
            if let Some(rays) = &fan.rank2_rays {
                doc["rays"] = Value::Array(rays.iter().map(|r| io::int_vector_to_json(r)).collect());
            }
            emit(out, &doc)?;
        }
    }
    Ok(Outcome::Ok)
}
