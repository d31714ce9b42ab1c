//! Command-line front end. Every subcommand prints one JSON document.
//!
//! Exit codes: 0 on success, 1 when a check fails or a computation aborts,
//! 2 on invalid input.

use std::io::Write;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use bzquilt::bzdiagram::BzDiagram;
use bzquilt::gtpattern::{hilbert_function_compare, ideal_equality_check};
use bzquilt::liealg::{invariant_dim, WeightVector, MAX_ORACLE_RANK};
use bzquilt::presentation::Presentation;
use bzquilt::quilt::Quilt;
use bzquilt::tree::Tree;

#[derive(Parser, Debug)]
#[command(name = "bzquilt", version, about = "BZ quilts on trivalent trees")]
struct Cli {
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Pretty-print with this many spaces (2 if no value is given).
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "2")]
    json_indent: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Minimal generators of Q_T(sl_3), built per proper subtree.
    Generators {
        #[arg(long)]
        tree: String,
    },
    /// Hilbert basis of the quilt cone by graded enumeration.
    Hilbert {
        #[arg(long)]
        tree: String,
        #[arg(long, default_value_t = 3)]
        m: usize,
        /// Largest boundary degree enumerated; defaults to the number of leaves.
        #[arg(long)]
        degree_bound: Option<i64>,
        /// Node budget for the completeness certificate; 0 skips it.
        #[arg(long, default_value_t = bzquilt::lattice::DEFAULT_CERTIFICATE_BUDGET)]
        budget: usize,
    },
    /// Lattice points in a fiber of the boundary map, against the tensor
    /// product oracle.
    Multiplicity {
        #[arg(long)]
        tree: String,
        /// Leaf weights, e.g. "1,0;1,0;1,0".
        #[arg(long)]
        weights: String,
    },
    /// Fiber-graph connectivity under the swap and cubic relations.
    VerifyPresentation {
        #[arg(long)]
        tree: String,
        #[arg(long, default_value_t = 3)]
        degree_bound: usize,
        /// Use only the swap family.
        #[arg(long)]
        swaps_only: bool,
    },
    /// Generators on the face where every leaf weight is a multiple of ω1.
    Pface {
        #[arg(long)]
        tree: String,
    },
    /// Caterpillar P-face against Gel'fand-Tsetlin patterns.
    GtCompare {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        degree_bound: u64,
        /// Degree bound for the move comparison; 0 skips it.
        #[arg(long, default_value_t = 3)]
        ideal_bound: usize,
    },
    /// Search for an indecomposable sl_m triangle with a non-fundamental
    /// side weight.
    Counterexample {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        max_degree: Option<i64>,
    },
}

enum Failure {
    Usage(String),
    Runtime(String),
}

type Outcome = Result<(Value, bool), Failure>;

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn runtime<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Runtime(e.to_string())
}

fn parse_tree(s: &str) -> Result<Tree, Failure> {
    s.parse().map_err(|e| usage(format!("--tree: {e}")))
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        if t == 0 {
            let _ = writeln!(err, "error: --threads must be positive");
            return 2;
        }
        builder = builder.num_threads(t);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 1;
        }
    };
    match pool.install(|| dispatch(cli.command)) {
        Ok((value, ok)) => {
            let text = render(&value, cli.json_indent);
            let _ = writeln!(out, "{text}");
            if ok {
                0
            } else {
                1
            }
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Runtime(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

fn render(value: &Value, indent: Option<usize>) -> String {
    match indent {
        None => value.to_string(),
        Some(k) => {
            let pad = vec![b' '; k];
            let fmt = serde_json::ser::PrettyFormatter::with_indent(&pad);
            let mut buf = Vec::new();
            let mut ser = serde_json::Serializer::with_formatter(&mut buf, fmt);
            value.serialize(&mut ser).expect("serializing a JSON value");
            String::from_utf8(buf).expect("JSON is UTF-8")
        }
    }
}

fn dispatch(cmd: Command) -> Outcome {
    match cmd {
        Command::Generators { tree } => generators(parse_tree(&tree)?),
        Command::Hilbert {
            tree,
            m,
            degree_bound,
            budget,
        } => hilbert(parse_tree(&tree)?, m, degree_bound, budget),
        Command::Multiplicity { tree, weights } => multiplicity(parse_tree(&tree)?, &weights),
        Command::VerifyPresentation {
            tree,
            degree_bound,
            swaps_only,
        } => verify(parse_tree(&tree)?, degree_bound, swaps_only),
        Command::Pface { tree } => pface(parse_tree(&tree)?),
        Command::GtCompare {
            n,
            degree_bound,
            ideal_bound,
        } => gt_compare(n, degree_bound, ideal_bound),
        Command::Counterexample { m, max_degree } => counterexample(m, max_degree),
    }
}

fn generator_json(p: &Presentation, i: usize) -> Value {
    let g = &p.generators()[i];
    let q = p.quilt();
    json!({
        "index": i,
        "leaves": g.subtree.leaf_set(),
        "variant": g.variant,
        "edges": g.subtree.edges(),
        "pieces": g.pieces.iter().map(|(v, pc)| json!({"trinode": v, "piece": pc.to_string()})).collect::<Vec<_>>(),
        "boundary": q.boundary_map(&g.weighting).to_string(),
        "omega2": q.omega2_functional(&g.weighting).expect("sl_3 quilt"),
    })
}

fn generators(tree: Tree) -> Outcome {
    let p = Presentation::new(tree).map_err(runtime)?;
    let n = p.tree().leaf_count() as u32;
    let expected = 2 * (2u64.pow(n) - n as u64 - 1);
    let count = p.generators().len() as u64;
    Ok((
        json!({
            "tree": p.tree().render(),
            "m": 3,
            "count": count,
            "expected": expected,
            "generators": (0..p.generators().len()).map(|i| generator_json(&p, i)).collect::<Vec<_>>(),
        }),
        count == expected,
    ))
}

fn hilbert(tree: Tree, m: usize, degree_bound: Option<i64>, budget: usize) -> Outcome {
    let bound = degree_bound.unwrap_or(tree.leaf_count() as i64);
    if bound < 1 {
        return Err(usage("--degree-bound must be at least 1"));
    }
    let q = Quilt::new(tree, m).map_err(usage)?;
    let cone = q.cone();
    let (elements, complete) = if budget == 0 {
        (cone.graded_indecomposables(bound).map_err(runtime)?, Value::Null)
    } else {
        let hb = cone.hilbert_basis_with_budget(bound, budget).map_err(runtime)?;
        (hb.elements, Value::Bool(hb.complete))
    };
    Ok((
        json!({
            "tree": q.tree().render(),
            "m": m,
            "degree_bound": bound,
            "complete": complete,
            "count": elements.len(),
            "elements": elements,
        }),
        true,
    ))
}

fn multiplicity(tree: Tree, weights: &str) -> Outcome {
    let lam: WeightVector = weights.parse().map_err(|e| usage(format!("--weights: {e}")))?;
    if lam.len() != tree.leaf_count() {
        return Err(usage(format!(
            "--weights: the tree has {} leaves but {} weights were given",
            tree.leaf_count(),
            lam.len()
        )));
    }
    let m = lam.rank() + 1;
    let q = Quilt::new(tree, m).map_err(usage)?;
    let count = q.count_fiber(&lam).map_err(runtime)?;
    let oracle = if lam.rank() <= MAX_ORACLE_RANK {
        Some(invariant_dim(&lam).map_err(runtime)?)
    } else {
        None
    };
    let agree = oracle.map(|o| o == count);
    Ok((
        json!({
            "tree": q.tree().render(),
            "m": m,
            "weights": lam.to_string(),
            "count": count,
            "oracle": oracle,
            "agree": agree,
        }),
        agree != Some(false),
    ))
}

fn verify(tree: Tree, degree_bound: usize, swaps_only: bool) -> Outcome {
    if degree_bound < 1 {
        return Err(usage("--degree-bound must be at least 1"));
    }
    let p = Presentation::new(tree).map_err(runtime)?;
    let fams = p.relation_families().map_err(runtime)?;
    let moves = if swaps_only { fams.swaps.clone() } else { fams.all() };
    let report = p.verify_with(degree_bound, &moves).map_err(runtime)?;
    let ok = report.passed();
    let mut v = serde_json::to_value(&report).map_err(runtime)?;
    v["swaps"] = json!(fams.swaps.len());
    v["cubics"] = json!(if swaps_only { 0 } else { fams.cubics.len() });
    Ok((v, ok))
}

fn pface(tree: Tree) -> Outcome {
    let p = Presentation::new(tree).map_err(runtime)?;
    let face = p.p_face_generators();
    let w1 = bzquilt::liealg::DominantWeight::fundamental(2, 1);
    let by_subtree: Vec<usize> = (0..p.generators().len())
        .filter(|&i| {
            let g = &p.generators()[i];
            p.tree().is_odd_subtree(&g.subtree)
                && g.subtree
                    .leaf_set()
                    .iter()
                    .all(|&l| p.quilt().boundary_map(&g.weighting).entries()[l - 1] == w1)
        })
        .collect();
    let agree = face == by_subtree;
    Ok((
        json!({
            "tree": p.tree().render(),
            "count": face.len(),
            "criteria_agree": agree,
            "generators": face.iter().map(|&i| generator_json(&p, i)).collect::<Vec<_>>(),
        }),
        agree,
    ))
}

fn gt_compare(n: usize, degree_bound: u64, ideal_bound: usize) -> Outcome {
    if n < 3 {
        return Err(usage("--n must be at least 3"));
    }
    let rows = hilbert_function_compare(n, degree_bound).map_err(runtime)?;
    let mut ok = rows.iter().all(|r| r.agrees());
    let ideal = if ideal_bound > 0 && n >= 4 {
        let rep = ideal_equality_check(n, ideal_bound).map_err(runtime)?;
        ok &= rep.passed();
        serde_json::to_value(&rep).map_err(runtime)?
    } else {
        Value::Null
    };
    Ok((
        json!({ "n": n, "hilbert_function": rows, "ideal": ideal, "passed": ok }),
        ok,
    ))
}

fn counterexample(m: usize, max_degree: Option<i64>) -> Outcome {
    if m < 2 {
        return Err(usage("--m must be at least 2"));
    }
    let d = BzDiagram::new(m).map_err(usage)?;
    let bound = max_degree.unwrap_or(4.max(m as i64 - 1));
    let found = d.nonfundamental_generator(bound).map_err(runtime)?;
    let ok = found.is_some();
    Ok((
        json!({
            "m": m,
            "max_degree": bound,
            "found": ok,
            "boundary": found.as_ref().map(|w| w.boundary(&d).to_string()),
            "entries": found.as_ref().map(|w| w.to_json(&d)),
        }),
        ok,
    ))
}
