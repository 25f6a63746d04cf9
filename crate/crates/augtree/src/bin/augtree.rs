use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use augtree::diameter::{graph_diameter, graph_diameter_with_threads, naive_diameter};
use augtree::error::Error;
use augtree::instance::{format_instance, gen_random, load_instance, Instance, RandomFamily, Shortcut};
use augtree::lowerbound::{adversary_experiment, gen_lb, AdversaryAlgo, LbVariant, LowerBoundParams};
use augtree::solvers::{self, ExactOptions, DEFAULT_WORK_BUDGET};
use augtree::{verify_metric, MetricCheck};

#[derive(Parser)]
#[command(name = "augtree", version, about = "Tree diameter augmentation toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenFamily {
    #[value(name = "random-l1")]
    RandomL1,
    #[value(name = "path-l1")]
    PathL1,
    Lb3,
    Lbk,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    I,
    Iab,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolveAlgo {
    Exact,
    Star4,
    Ptas,
    Gonzalez,
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchAlgo {
    Diam,
    Naive,
    Star4,
    Gonzalez,
}

#[derive(Clone, Copy, ValueEnum)]
enum LbFamily {
    Lb3,
    Lbk,
}

#[derive(Clone, Copy, ValueEnum)]
enum AdvAlgo {
    Exact,
    Star4,
    Ptas,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate an instance and write it in the DOAT format.
    Gen {
        #[arg(long)]
        family: GenFamily,
        /// Vertex count (random-l1 / path-l1 families).
        #[arg(long)]
        n: Option<usize>,
        /// Star size (lb3 / lbk families).
        #[arg(long = "n-star")]
        n_star: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Lower-bound variant; Iab carries the single cheap pair.
        #[arg(long)]
        variant: Option<VariantArg>,
        /// Cheap-pair endpoints for variant Iab (defaults to the first leaves).
        #[arg(long)]
        a: Option<usize>,
        #[arg(long)]
        b: Option<usize>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Exact diameter of the instance tree plus a shortcut set.
    Diam {
        #[arg(short, long)]
        input: PathBuf,
        /// Shortcuts as `u-v:cost` (comma separated); omit `:cost` to price
        /// the edge through the instance oracle.
        #[arg(short, long)]
        shortcuts: Option<String>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Run a solver and print its result as JSON.
    Solve {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long)]
        algo: SolveAlgo,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
        /// Pick count for the farthest-first traversal (defaults to k+1).
        #[arg(long)]
        h: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_WORK_BUDGET)]
        budget: u64,
        /// Allow shortcuts parallel to tree edges in exact enumeration.
        #[arg(long)]
        generalized: bool,
        /// First pick of the farthest-first traversal.
        #[arg(long, default_value_t = 0)]
        start: usize,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Check the triangle inequality of the instance oracle.
    Verify {
        #[arg(short, long)]
        input: PathBuf,
        /// Check all triples instead of a random sample.
        #[arg(long)]
        full: bool,
        #[arg(long, default_value_t = 200_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Time an algorithm over generated instances and write a CSV table.
    Bench {
        #[arg(long)]
        algo: BenchAlgo,
        /// Comma-separated instance sizes.
        #[arg(long)]
        sizes: String,
        #[arg(long, default_value_t = 4)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Query-count experiments on the adversarial family.
    Adversary {
        #[arg(long)]
        family: LbFamily,
        #[arg(long = "n-star")]
        n_star: usize,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        algo: AdvAlgo,
        /// How many cheap-pair variants to sample.
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
        #[arg(long, default_value_t = DEFAULT_WORK_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
}

fn parse_shortcuts(instance: &Instance, text: &str) -> Result<Vec<Shortcut>, Error> {
    let mut out = Vec::new();
    for tok in text.split(',').filter(|t| !t.trim().is_empty()) {
        let tok = tok.trim();
        let (pair, cost) = match tok.split_once(':') {
            Some((p, c)) => {
                let cost: u64 = c
                    .parse()
                    .map_err(|_| Error::Solver(format!("bad shortcut cost in {tok:?}")))?;
                (p, Some(cost))
            }
            None => (tok, None),
        };
        let (u, v) = pair
            .split_once('-')
            .ok_or_else(|| Error::Solver(format!("expected u-v[:cost], got {tok:?}")))?;
        let u: usize = u.parse().map_err(|_| Error::Solver(format!("bad vertex in {tok:?}")))?;
        let v: usize = v.parse().map_err(|_| Error::Solver(format!("bad vertex in {tok:?}")))?;
        if u == v || u >= instance.tree.n() || v >= instance.tree.n() {
            return Err(Error::Solver(format!("invalid shortcut pair {u}-{v}")));
        }
        let cost = cost.unwrap_or_else(|| instance.oracle.cost(u, v));
        out.push(Shortcut { u, v, cost });
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.cmd {
        Cmd::Gen { family, n, n_star, k, seed, variant, a, b, output } => {
            let instance = match family {
                GenFamily::RandomL1 | GenFamily::PathL1 => {
                    let n = n.ok_or_else(|| Error::Solver("--n is required for this family".into()))?;
                    let fam = if matches!(family, GenFamily::RandomL1) {
                        RandomFamily::RandomL1
                    } else {
                        RandomFamily::PathL1
                    };
                    gen_random(n, k.unwrap_or(1), seed, fam)?
                }
                GenFamily::Lb3 | GenFamily::Lbk => {
                    let n_star = n_star
                        .ok_or_else(|| Error::Solver("--n-star is required for this family".into()))?;
                    let k = match family {
                        GenFamily::Lb3 => {
                            let k = k.unwrap_or(3);
                            if k != 3 {
                                return Err(Error::Solver("family lb3 fixes k = 3".into()));
                            }
                            k
                        }
                        _ => k.ok_or_else(|| Error::Solver("--k is required for family lbk".into()))?,
                    };
                    let variant = match variant.unwrap_or(VariantArg::Iab) {
                        VariantArg::I => LbVariant::I,
                        VariantArg::Iab => {
                            let (da, db) = LowerBoundParams::default_ab(n_star);
                            LbVariant::Iab { a: a.unwrap_or(da), b: b.unwrap_or(db) }
                        }
                    };
                    gen_lb(&LowerBoundParams::new(n_star, k, variant)?)?
                }
            };
            fs::write(&output, format_instance(&instance))?;
            println!("wrote {} (n={}, k={})", output.display(), instance.tree.n(), instance.k);
            Ok(())
        }
        Cmd::Diam { input, shortcuts, threads } => {
            let instance = load_instance(&input)?;
            let set = match &shortcuts {
                Some(text) => parse_shortcuts(&instance, text)?,
                None => Vec::new(),
            };
            let r = graph_diameter_with_threads(&instance.tree, &set, threads);
            println!("diameter {}", r.value);
            println!("witness {} {}", r.witness.0, r.witness.1);
            Ok(())
        }
        Cmd::Solve { input, algo, eps, h, budget, generalized, start, threads } => {
            let instance = load_instance(&input)?;
            let result = match algo {
                SolveAlgo::Exact => {
                    solvers::exact_doat(&instance, &ExactOptions { generalized, budget, threads })?
                }
                SolveAlgo::Star4 => {
                    let n = instance.tree.n() as f64;
                    let guard = (n / n.log2().max(1.0)).sqrt();
                    if instance.k as f64 > guard {
                        eprintln!(
                            "warning: k = {} exceeds the sqrt(n/log n) guard ({guard:.1}); \
                             the linear-time bound does not apply",
                            instance.k
                        );
                    }
                    solvers::approx4(&instance)?
                }
                SolveAlgo::Ptas => solvers::ptas(&instance, eps, budget)?,
                SolveAlgo::Gonzalez => {
                    let h = h.unwrap_or(instance.k + 1);
                    let run = solvers::gonzalez(&instance.tree, h, start)?;
                    let json = serde_json::json!({
                        "algo": "gonzalez",
                        "picks": run.picks,
                        "step_values": run.step_values,
                    });
                    println!("{}", serde_json::to_string_pretty(&json).expect("serializable"));
                    return Ok(());
                }
            };
            println!("{}", serde_json::to_string_pretty(&result).expect("serializable result"));
            Ok(())
        }
        Cmd::Verify { input, full, samples, seed } => {
            let instance = load_instance(&input)?;
            let n = instance.tree.n();
            if n < 3 {
                println!("metric true (fewer than three vertices)");
                return Ok(());
            }
            let mode =
                if full { MetricCheck::Full } else { MetricCheck::Sampled { samples, seed } };
            let report = verify_metric(&instance.oracle, n, mode);
            match report.violation {
                None => println!("metric true ({} mode)", if full { "full" } else { "sampled" }),
                Some((u, w, v)) => {
                    println!("metric false");
                    println!(
                        "violation ({u},{w},{v}): cost({u},{v})={} > cost({u},{w})={} + cost({w},{v})={}",
                        instance.oracle.peek(u, v),
                        instance.oracle.peek(u, w),
                        instance.oracle.peek(w, v)
                    );
                }
            }
            Ok(())
        }
        Cmd::Bench { algo, sizes, k, reps, seed, output } => {
            let sizes: Vec<usize> = sizes
                .split(',')
                .map(|s| s.trim().parse().map_err(|_| Error::Solver(format!("bad size {s:?}"))))
                .collect::<Result<_, _>>()?;
            let mut csv = String::from("algo,n,k,rep,millis,value\n");
            for &n in &sizes {
                for rep in 0..reps {
                    let inst_seed = seed ^ ((n as u64) << 20) ^ rep as u64;
                    let instance = gen_random(n, k.max(1), inst_seed, RandomFamily::RandomL1)?;
                    let (name, millis, value) = match algo {
                        BenchAlgo::Diam | BenchAlgo::Naive => {
                            use rand::prelude::*;
                            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(inst_seed ^ 0x5eed);
                            let mut pairs = std::collections::HashSet::new();
                            while pairs.len() < k.min(n * (n - 1) / 2) {
                                let u = rng.random_range(0..n);
                                let v = rng.random_range(0..n);
                                if u != v {
                                    pairs.insert((u.min(v), u.max(v)));
                                }
                            }
                            let set: Vec<Shortcut> = pairs
                                .into_iter()
                                .map(|(u, v)| Shortcut { u, v, cost: instance.oracle.cost(u, v) })
                                .collect();
                            let t0 = Instant::now();
                            let (name, value) = if matches!(algo, BenchAlgo::Diam) {
                                ("diam", graph_diameter(&instance.tree, &set).value)
                            } else {
                                ("naive", naive_diameter(&instance.tree, &set).value)
                            };
                            (name, t0.elapsed().as_secs_f64() * 1e3, value)
                        }
                        BenchAlgo::Star4 => {
                            let t0 = Instant::now();
                            let r = solvers::approx4(&instance)?;
                            ("star4", t0.elapsed().as_secs_f64() * 1e3, r.diam)
                        }
                        BenchAlgo::Gonzalez => {
                            let t0 = Instant::now();
                            let r = solvers::gonzalez(&instance.tree, (k + 1).min(n), 0)?;
                            ("gonzalez", t0.elapsed().as_secs_f64() * 1e3, *r.step_values.last().unwrap())
                        }
                    };
                    writeln!(csv, "{name},{n},{k},{rep},{millis:.3},{value}").unwrap();
                }
            }
            fs::write(&output, csv)?;
            println!("wrote {}", output.display());
            Ok(())
        }
        Cmd::Adversary { family, n_star, k, algo, samples, eps, budget, seed, output } => {
            let k = match family {
                LbFamily::Lb3 => {
                    let k = k.unwrap_or(3);
                    if k != 3 {
                        return Err(Error::Solver("family lb3 fixes k = 3".into()));
                    }
                    k
                }
                LbFamily::Lbk => {
                    k.ok_or_else(|| Error::Solver("--k is required for family lbk".into()))?
                }
            };
            let algo = match algo {
                AdvAlgo::Star4 => AdversaryAlgo::Approx4,
                AdvAlgo::Ptas => AdversaryAlgo::Ptas { eps, budget },
                AdvAlgo::Exact => AdversaryAlgo::Exact { budget },
            };
            let report = adversary_experiment(n_star, k, algo, samples, seed)?;
            fs::write(&output, report.to_csv())?;
            println!(
                "unqueried candidate pairs on I: {} of {}",
                report.unqueried_ab_pairs, report.total_ab_pairs
            );
            println!("wrote {}", output.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
