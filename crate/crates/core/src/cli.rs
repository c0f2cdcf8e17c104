//! Command-line front end: parse grading spec documents, run
//! validation, invariants, sweeps, classification and oracle
//! cross-checks, and emit deterministic machine- and human-readable
//! reports.
//!
//! Exit codes: `0` success, `1` unreadable or malformed input, `2`
//! semantic failure (an invalid spec or an oracle disagreement).

use crate::abelian::{Character, FinAbGroup, GroupElem, QmodZ, Subgroup};
use crate::bichar::{
    commutation_factor_from_pair, BrauerClass, CommutationFactor, SubgroupBicharacter,
};
use crate::classify::{count_graded_simples, graded_simple_label, weights_up_to};
use crate::gradings::{GradingSpec, Orientation, Weight};
use crate::invariants::{
    brauer_invariant, gamma_hat_0_d_outer, gamma_hat_b, gamma_hat_plus_d, InvariantReport,
};
use crate::oracle::clifford::{
    b_constructive_spin_element, b_spin_factor, d_outer_cross_terms_match,
    d_outer_quotient_factor_pair, half_spin_factor_pair, spin_rep_for, DEFAULT_DIM_CAP,
};
use crate::oracle::monomial::{
    commutation_factor_bruteforce, wedge_commutation_factor,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::path::PathBuf;

/// Largest exterior-power dimension the `check` verb will enumerate.
const WEDGE_DIM_CAP: usize = 1 << 12;

/// On-disk JSON document describing a grading spec and optional verb
/// parameters.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    /// Document format version; must be `"1"`.
    pub schema_version: String,
    /// Cyclic factor orders of the grading group.
    pub group: Vec<u64>,
    /// Series variant: `A-inner`, `A-outer`, `B`, `C`, `D-inner` or
    /// `D-outer`.
    pub series: String,
    /// Rank of the Lie algebra.
    pub rank: usize,
    /// Generators of the support `T`, as coordinate vectors.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_gens: Option<Vec<Vec<i64>>>,
    /// Bicharacter values `beta(t_i, t_j)` as `"p/q"` strings.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Vec<Vec<String>>>,
    /// Module degrees.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<Vec<Vec<i64>>>,
    /// Degree of the invariant form (with sign convention `-g0`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g0: Option<Vec<i64>>,
    /// Diagonal support elements of the form.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ti: Option<Vec<Vec<i64>>>,
    /// Distinguished order-2 element of an outer A datum.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<i64>>,
    /// Dual coordinates of the character cutting out `K` (outer A).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<Vec<i64>>,
    /// Half-spin orientation for inner D: `"plus"` or `"minus"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<String>,
    /// Optional symmetry-type tag for outer A data.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu0: Option<String>,
    /// Default weight for `invariant` / `classify`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<Vec<u64>>,
    /// Default bound for `sweep`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<u64>,
    /// Default quadratic-space dimension cap for `check`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_cap: Option<usize>,
}

/// A CLI failure carrying the exit code it maps to.
enum CliError {
    /// Unreadable or structurally malformed input (exit 1).
    Document(String),
    /// A mathematically invalid spec (exit 2).
    Invalid(Vec<String>),
}

impl CliError {
    fn invalid(msg: impl Into<String>) -> CliError {
        CliError::Invalid(vec![msg.into()])
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(
    name = "graded-brauer",
    about = "Exact invariants of gradings on classical simple Lie algebras",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Validate a grading spec document.
    Validate { file: PathBuf },
    /// Report the invariants of one highest weight.
    Invariant {
        file: PathBuf,
        /// Comma-separated fundamental-weight multiplicities.
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Tabulate invariants for all weights up to a coefficient bound.
    Sweep {
        file: PathBuf,
        /// Bound on the sum of weight coefficients.
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Print the canonical graded-simple label of a weight and shift.
    Classify {
        file: PathBuf,
        /// Comma-separated fundamental-weight multiplicities.
        #[arg(long)]
        lambda: Option<String>,
        /// Comma-separated coordinates of the degree shift.
        #[arg(long)]
        shift: Option<String>,
    },
    /// Cross-check closed-form invariants against brute-force oracles.
    Check {
        file: PathBuf,
        /// Largest quadratic-space dimension n handled by the Clifford
        /// oracle (the algebra has dimension 2^n).
        #[arg(long = "max-dim")]
        max_dim: Option<usize>,
    },
}

/// Runs the CLI on the given arguments (without the program name) and
/// returns the exit code and the full output.
pub fn run(args: &[String]) -> (i32, String) {
    let mut argv = vec!["graded-brauer".to_string()];
    argv.extend(args.iter().cloned());
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            return (code, e.to_string());
        }
    };
    let format = cli.format;
    let result = match &cli.cmd {
        Cmd::Validate { file } => cmd_validate(file, format),
        Cmd::Invariant { file, lambda } => cmd_invariant(file, lambda.as_deref(), format),
        Cmd::Sweep { file, bound } => cmd_sweep(file, *bound, format),
        Cmd::Classify {
            file,
            lambda,
            shift,
        } => cmd_classify(file, lambda.as_deref(), shift.as_deref(), format),
        Cmd::Check { file, max_dim } => cmd_check(file, *max_dim, format),
    };
    match result {
        Ok((code, out)) => (code, out),
        Err(CliError::Document(msg)) => (1, render_error(format, "error", &[msg])),
        Err(CliError::Invalid(msgs)) => (2, render_error(format, "invalid", &msgs)),
    }
}

fn render_error(format: Format, status: &str, msgs: &[String]) -> String {
    match format {
        Format::Json => {
            let v = json!({ "status": status, "messages": msgs });
            format!("{}\n", v)
        }
        Format::Text => {
            let mut out = format!("{}\n", status);
            for m in msgs {
                let _ = writeln!(out, "- {}", m);
            }
            out
        }
    }
}

fn load_document(path: &PathBuf) -> Result<SpecDocument, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Document(format!("cannot read {}: {}", path.display(), e)))?;
    let doc: SpecDocument = serde_json::from_str(&text)
        .map_err(|e| CliError::Document(format!("parse error: {}", e)))?;
    if doc.schema_version != "1" {
        return Err(CliError::Document(format!(
            "unsupported schema_version {:?}",
            doc.schema_version
        )));
    }
    Ok(doc)
}

impl SpecDocument {
    fn group(&self) -> Result<FinAbGroup, CliError> {
        FinAbGroup::new(self.group.clone())
            .map_err(|e| CliError::Document(format!("bad group orders: {}", e)))
    }

    fn elem(&self, g: &FinAbGroup, coords: &[i64], what: &str) -> Result<GroupElem, CliError> {
        g.elem(coords)
            .map_err(|e| CliError::Document(format!("bad {} coordinates: {}", what, e)))
    }

    fn elems(
        &self,
        g: &FinAbGroup,
        rows: &[Vec<i64>],
        what: &str,
    ) -> Result<Vec<GroupElem>, CliError> {
        rows.iter().map(|r| self.elem(g, r, what)).collect()
    }

    fn require<'a, T>(opt: &'a Option<T>, name: &str) -> Result<&'a T, CliError> {
        opt.as_ref()
            .ok_or_else(|| CliError::Document(format!("missing required field {:?}", name)))
    }

    fn beta_matrix(&self) -> Result<Vec<Vec<QmodZ>>, CliError> {
        let rows = Self::require(&self.beta, "beta")?;
        rows.iter()
            .map(|row| {
                row.iter()
                    .map(|s| {
                        QmodZ::parse(s).ok_or_else(|| {
                            CliError::Document(format!("bad rational {:?} in beta", s))
                        })
                    })
                    .collect()
            })
            .collect()
    }

    fn brauer_class(&self, g: &FinAbGroup) -> Result<BrauerClass, CliError> {
        let gens = self.elems(g, Self::require(&self.t_gens, "t_gens")?, "t_gens")?;
        let beta = self.beta_matrix()?;
        let sub = SubgroupBicharacter::from_generator_values(g, &gens, beta)
            .map_err(|e| CliError::invalid(format!("beta is not a support bicharacter: {}", e)))?;
        BrauerClass::new(g.clone(), sub)
            .map_err(|e| CliError::invalid(format!("(T, beta) is not a Brauer class: {}", e)))
    }

    /// Converts the document to a grading spec, without validating the
    /// series relations (use `GradingSpec::validate` for that).
    pub fn to_grading_spec(&self) -> Result<GradingSpec, String> {
        self.build_spec().map_err(|e| match e {
            CliError::Document(m) => m,
            CliError::Invalid(ms) => ms.join("; "),
        })
    }

    fn build_spec(&self) -> Result<GradingSpec, CliError> {
        let g = self.group()?;
        match self.series.as_str() {
            "A-inner" => Ok(GradingSpec::AInner {
                rank: self.rank,
                class: self.brauer_class(&g)?,
                xi: self.elems(&g, Self::require(&self.xi, "xi")?, "xi")?,
            }),
            "A-outer" => {
                let h = self.elem(&g, Self::require(&self.h, "h")?, "h")?;
                let chi_coords = self.elem(&g, Self::require(&self.chi, "chi")?, "chi")?;
                let t_gens = match &self.t_gens {
                    Some(rows) => self.elems(&g, rows, "t_gens")?,
                    None => Vec::new(),
                };
                let t_beta = if t_gens.is_empty() {
                    Vec::new()
                } else {
                    self.beta_matrix()?
                };
                Ok(GradingSpec::AOuter {
                    group: g.clone(),
                    rank: self.rank,
                    h,
                    chi: Character::from_dual_elem(chi_coords),
                    t_gens,
                    t_beta,
                    g0: self.elem(&g, Self::require(&self.g0, "g0")?, "g0")?,
                    xi: self.elems(&g, Self::require(&self.xi, "xi")?, "xi")?,
                    ti: self.elems(&g, Self::require(&self.ti, "ti")?, "ti")?,
                    mu0: self.mu0.clone(),
                })
            }
            "B" => Ok(GradingSpec::B {
                group: g.clone(),
                rank: self.rank,
                g0: self.elem(&g, Self::require(&self.g0, "g0")?, "g0")?,
                xi: self.elems(&g, Self::require(&self.xi, "xi")?, "xi")?,
            }),
            "C" => Ok(GradingSpec::C {
                rank: self.rank,
                class: self.brauer_class(&g)?,
            }),
            "D-inner" => Ok(GradingSpec::DInner {
                rank: self.rank,
                class: self.brauer_class(&g)?,
                g0: self.elem(&g, Self::require(&self.g0, "g0")?, "g0")?,
                xi: self.elems(&g, Self::require(&self.xi, "xi")?, "xi")?,
                ti: self.elems(&g, Self::require(&self.ti, "ti")?, "ti")?,
                orientation: match self.orientation.as_deref() {
                    Some("plus") | None => Orientation::Plus,
                    Some("minus") => Orientation::Minus,
                    Some(other) => {
                        return Err(CliError::Document(format!(
                            "orientation must be \"plus\" or \"minus\", got {:?}",
                            other
                        )))
                    }
                },
            }),
            "D-outer" => Ok(GradingSpec::DOuter {
                rank: self.rank,
                class: self.brauer_class(&g)?,
                g0: self.elem(&g, Self::require(&self.g0, "g0")?, "g0")?,
                xi: self.elems(&g, Self::require(&self.xi, "xi")?, "xi")?,
                ti: self.elems(&g, Self::require(&self.ti, "ti")?, "ti")?,
            }),
            other => Err(CliError::Document(format!(
                "unknown series {:?} (expected A-inner, A-outer, B, C, D-inner or D-outer)",
                other
            ))),
        }
    }
}

fn load_valid_spec(path: &PathBuf) -> Result<(SpecDocument, GradingSpec), CliError> {
    let doc = load_document(path)?;
    let spec = doc.build_spec()?;
    let violations = spec.validate();
    if !violations.is_empty() {
        return Err(CliError::Invalid(violations));
    }
    Ok((doc, spec))
}

fn parse_weight(
    doc: &SpecDocument,
    arg: Option<&str>,
    rank: usize,
) -> Result<Weight, CliError> {
    let coeffs: Vec<u64> = match arg {
        Some(s) => s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u64>()
                    .map_err(|_| CliError::Document(format!("bad weight component {:?}", p)))
            })
            .collect::<Result<_, _>>()?,
        None => doc
            .weight
            .clone()
            .ok_or_else(|| CliError::Document("no weight given (use --lambda)".into()))?,
    };
    if coeffs.len() != rank {
        return Err(CliError::Document(format!(
            "weight has {} components but the rank is {}",
            coeffs.len(),
            rank
        )));
    }
    Ok(Weight::new(coeffs))
}

fn weight_json(w: &Weight) -> Value {
    json!(w.coeffs())
}

fn subgroup_json(s: &Subgroup) -> Value {
    json!(s.basis().iter().map(|g| g.coords().to_vec()).collect::<Vec<_>>())
}

fn report_json(report: &InvariantReport) -> Value {
    let basis = report.support.basis();
    let beta: Vec<Vec<String>> = basis
        .iter()
        .map(|s| {
            basis
                .iter()
                .map(|t| report.brauer.beta().eval(s, t).to_string())
                .collect()
        })
        .collect();
    json!({
        "lambda": weight_json(&report.lambda),
        "h_lambda": subgroup_json(&report.h_lambda),
        "quotient_orders": report.quotient_group.orders(),
        "support": subgroup_json(&report.support),
        "beta": beta,
        "schur_index": report.schur_index,
        "admits": report.admits_grading,
    })
}

fn weight_text(w: &Weight) -> String {
    let parts: Vec<String> = w.coeffs().iter().map(|c| c.to_string()).collect();
    parts.join(",")
}

fn coords_text(g: &GroupElem) -> String {
    let parts: Vec<String> = g.coords().iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(","))
}

fn subgroup_text(s: &Subgroup) -> String {
    if s.basis().is_empty() {
        "trivial".to_string()
    } else {
        let parts: Vec<String> = s.basis().iter().map(coords_text).collect();
        format!("<{}>", parts.join(", "))
    }
}

fn cmd_validate(path: &PathBuf, format: Format) -> Result<(i32, String), CliError> {
    let doc = load_document(path)?;
    let spec = doc.build_spec()?;
    let violations = spec.validate();
    if violations.is_empty() {
        let out = match format {
            Format::Json => format!("{}\n", json!({ "status": "valid" })),
            Format::Text => "valid\n".to_string(),
        };
        Ok((0, out))
    } else {
        Err(CliError::Invalid(violations))
    }
}

fn cmd_invariant(
    path: &PathBuf,
    lambda: Option<&str>,
    format: Format,
) -> Result<(i32, String), CliError> {
    let (doc, spec) = load_valid_spec(path)?;
    let lambda = parse_weight(&doc, lambda, spec.rank())?;
    let report = brauer_invariant(&spec, &lambda)
        .map_err(|e| CliError::invalid(e.to_string()))?;
    let out = match format {
        Format::Json => format!("{}\n", report_json(&report)),
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "lambda: {}", weight_text(&report.lambda));
            let _ = writeln!(out, "h_lambda: {}", subgroup_text(&report.h_lambda));
            let _ = writeln!(
                out,
                "quotient orders: {:?}",
                report.quotient_group.orders()
            );
            let _ = writeln!(out, "support: {}", subgroup_text(&report.support));
            let _ = writeln!(out, "schur index: {}", report.schur_index);
            let _ = writeln!(out, "admits grading: {}", report.admits_grading);
            out
        }
    };
    Ok((0, out))
}

fn cmd_sweep(
    path: &PathBuf,
    bound: Option<u64>,
    format: Format,
) -> Result<(i32, String), CliError> {
    let (doc, spec) = load_valid_spec(path)?;
    let bound = bound
        .or(doc.bound)
        .ok_or_else(|| CliError::Document("no sweep bound given (use --bound)".into()))?;
    let mut rows: Vec<(Vec<Weight>, InvariantReport)> = Vec::new();
    let mut seen: Vec<Vec<Weight>> = Vec::new();
    for lambda in weights_up_to(spec.rank(), bound) {
        let (orbit, _) = spec
            .weight_orbit(&lambda)
            .map_err(|e| CliError::invalid(e.to_string()))?;
        if seen.contains(&orbit) {
            continue;
        }
        let report = brauer_invariant(&spec, &orbit[0])
            .map_err(|e| CliError::invalid(e.to_string()))?;
        rows.push((orbit.clone(), report));
        seen.push(orbit);
    }
    let (label_count, _) = count_graded_simples(&spec, bound)
        .map_err(|e| CliError::invalid(e.to_string()))?;
    let out = match format {
        Format::Json => {
            let rows_json: Vec<Value> = rows
                .iter()
                .map(|(orbit, report)| {
                    json!({
                        "orbit": orbit.iter().map(weight_json).collect::<Vec<_>>(),
                        "h_lambda": subgroup_json(&report.h_lambda),
                        "schur_index": report.schur_index,
                        "admits": report.admits_grading,
                    })
                })
                .collect();
            let v = json!({
                "bound": bound,
                "rows": rows_json,
                "graded_simple_labels": label_count,
            });
            format!("{}\n", v)
        }
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "bound: {}", bound);
            for (orbit, report) in &rows {
                let orbit_str: Vec<String> = orbit.iter().map(weight_text).collect();
                let _ = writeln!(
                    out,
                    "{{{}}} h={} index={} admits={}",
                    orbit_str.join(" "),
                    subgroup_text(&report.h_lambda),
                    report.schur_index,
                    report.admits_grading
                );
            }
            let _ = writeln!(out, "graded-simple labels: {}", label_count);
            out
        }
    };
    Ok((0, out))
}

fn cmd_classify(
    path: &PathBuf,
    lambda: Option<&str>,
    shift: Option<&str>,
    format: Format,
) -> Result<(i32, String), CliError> {
    let (doc, spec) = load_valid_spec(path)?;
    let lambda = parse_weight(&doc, lambda, spec.rank())?;
    let group = spec.group().clone();
    let shift = match shift {
        Some(s) => {
            let coords: Vec<i64> = s
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse::<i64>()
                        .map_err(|_| CliError::Document(format!("bad shift component {:?}", p)))
                })
                .collect::<Result<_, _>>()?;
            group
                .elem(&coords)
                .map_err(|e| CliError::Document(format!("bad shift: {}", e)))?
        }
        None => group.identity(),
    };
    let label = graded_simple_label(&spec, &lambda, &shift)
        .map_err(|e| CliError::invalid(e.to_string()))?;
    let out = match format {
        Format::Json => {
            let v = json!({
                "orbit": label.orbit.iter().map(weight_json).collect::<Vec<_>>(),
                "coset_rep": label.coset_rep.coords(),
                "stabilizer": subgroup_json(&label.g_lambda),
            });
            format!("{}\n", v)
        }
        Format::Text => {
            let orbit_str: Vec<String> = label.orbit.iter().map(weight_text).collect();
            let mut out = String::new();
            let _ = writeln!(out, "orbit: {{{}}}", orbit_str.join(" "));
            let _ = writeln!(out, "coset rep: {}", coords_text(&label.coset_rep));
            let _ = writeln!(out, "stabilizer: {}", subgroup_text(&label.g_lambda));
            out
        }
    };
    Ok((0, out))
}

/// Result of one oracle comparison.
enum CheckStatus {
    Ok,
    Skipped(String),
    Mismatch(String),
}

struct CheckItem {
    name: String,
    status: CheckStatus,
}

fn same_factor(a: &CommutationFactor, b: &CommutationFactor) -> bool {
    a.add(&b.neg()).is_trivial()
}

fn fundamental(rank: usize, i: usize) -> Weight {
    let mut coeffs = vec![0u64; rank];
    coeffs[i] = 1;
    Weight::new(coeffs)
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for j in 0..k.min(n - k) {
        acc = acc * (n - j) as u128 / (j + 1) as u128;
        if acc > u128::from(u64::MAX) {
            return usize::MAX;
        }
    }
    acc.min(usize::MAX as u128) as usize
}

fn check_a_inner(
    spec: &GradingSpec,
    items: &mut Vec<CheckItem>,
) -> Result<(), CliError> {
    let GradingSpec::AInner { rank, class, xi } = spec else {
        unreachable!("dispatched on series");
    };
    let group = spec.group().clone();
    let natural = commutation_factor_bruteforce(&group, class, xi)
        .map_err(|e| CliError::invalid(e.to_string()))?;
    items.push(CheckItem {
        name: "natural module commutation factor".into(),
        status: if same_factor(&natural, &commutation_factor_from_pair(class)) {
            CheckStatus::Ok
        } else {
            CheckStatus::Mismatch("brute force disagrees with the class".into())
        },
    });
    let dim = xi.len() * class.schur_index() as usize;
    for i in 1..=*rank {
        let name = format!("exterior power {} commutation factor", i);
        if binomial(dim, i) > WEDGE_DIM_CAP {
            items.push(CheckItem {
                name,
                status: CheckStatus::Skipped(format!(
                    "exterior power dimension exceeds {}",
                    WEDGE_DIM_CAP
                )),
            });
            continue;
        }
        let wedge = wedge_commutation_factor(&group, class, xi, i)
            .map_err(|e| CliError::invalid(e.to_string()))?;
        let report = brauer_invariant(spec, &fundamental(*rank, i - 1))
            .map_err(|e| CliError::invalid(e.to_string()))?;
        let expected = commutation_factor_from_pair(&report.brauer);
        items.push(CheckItem {
            name,
            status: if same_factor(&wedge, &expected) {
                CheckStatus::Ok
            } else {
                CheckStatus::Mismatch("wedge oracle disagrees with the formula".into())
            },
        });
    }
    Ok(())
}

fn check_a_outer(spec: &GradingSpec, items: &mut Vec<CheckItem>) -> Result<(), CliError> {
    let data = spec
        .aouter_data()
        .map_err(|e| CliError::invalid(e.to_string()))?;
    let natural = commutation_factor_bruteforce(
        &data.quotient,
        &data.class,
        &data.xi,
    )
    .map_err(|e| CliError::invalid(e.to_string()))?;
    items.push(CheckItem {
        name: "quotient division algebra commutation factor".into(),
        status: if same_factor(&natural, &commutation_factor_from_pair(&data.class)) {
            CheckStatus::Ok
        } else {
            CheckStatus::Mismatch("brute force disagrees with the quotient class".into())
        },
    });
    // Asymmetric first fundamental weight: the class is the quotient
    // class itself.
    let report = brauer_invariant(spec, &fundamental(spec.rank(), 0))
        .map_err(|e| CliError::invalid(e.to_string()))?;
    items.push(CheckItem {
        name: "asymmetric weight Brauer class".into(),
        status: if same_factor(
            &commutation_factor_from_pair(&report.brauer),
            &commutation_factor_from_pair(&data.class),
        ) {
            CheckStatus::Ok
        } else {
            CheckStatus::Mismatch("asymmetric class is not the quotient class".into())
        },
    });
    Ok(())
}

fn check_b(
    spec: &GradingSpec,
    cap: usize,
    items: &mut Vec<CheckItem>,
) -> Result<(), CliError> {
    match b_spin_factor(spec, cap) {
        Ok(factor) => {
            let expected = gamma_hat_b(spec).map_err(|e| CliError::invalid(e.to_string()))?;
            items.push(CheckItem {
                name: "spin commutation factor".into(),
                status: if same_factor(&factor, &expected) {
                    CheckStatus::Ok
                } else {
                    CheckStatus::Mismatch("Clifford oracle disagrees with the sign rule".into())
                },
            });
            let rep = spin_rep_for(spec, cap).map_err(|e| CliError::invalid(e.to_string()))?;
            let group = rep.group().clone();
            let mut ok = true;
            for i in 0..group.rank() {
                let chi = Character::from_dual_elem(group.standard_gen(i));
                let lifted = rep
                    .spin_element(&chi)
                    .map_err(|e| CliError::invalid(e.to_string()))?;
                let constructive = b_constructive_spin_element(&rep, &chi)
                    .map_err(|e| CliError::invalid(e.to_string()))?;
                if constructive.scalar_ratio(&lifted.elem).is_none() {
                    ok = false;
                }
            }
            items.push(CheckItem {
                name: "constructive spin lifts".into(),
                status: if ok {
                    CheckStatus::Ok
                } else {
                    CheckStatus::Mismatch(
                        "constructive lift is not proportional to the reflection lift".into(),
                    )
                },
            });
        }
        Err(e) => items.push(CheckItem {
            name: "spin commutation factor".into(),
            status: CheckStatus::Skipped(e.to_string()),
        }),
    }
    Ok(())
}

fn check_c(spec: &GradingSpec, items: &mut Vec<CheckItem>) -> Result<(), CliError> {
    let GradingSpec::C { rank, class } = spec else {
        unreachable!("dispatched on series");
    };
    let group = class.ambient().clone();
    let ell = class.schur_index() as usize;
    if (2 * rank) % ell != 0 {
        items.push(CheckItem {
            name: "exterior power commutation factors".into(),
            status: CheckStatus::Skipped("2r is not a multiple of the index".into()),
        });
        return Ok(());
    }
    let k = 2 * rank / ell;
    let xi = vec![group.identity(); k];
    for i in 1..=*rank {
        let name = format!("exterior power {} commutation factor", i);
        if binomial(2 * rank, i) > WEDGE_DIM_CAP {
            items.push(CheckItem {
                name,
                status: CheckStatus::Skipped(format!(
                    "exterior power dimension exceeds {}",
                    WEDGE_DIM_CAP
                )),
            });
            continue;
        }
        let wedge = wedge_commutation_factor(&group, class, &xi, i)
            .map_err(|e| CliError::invalid(e.to_string()))?;
        let report = brauer_invariant(spec, &fundamental(*rank, i - 1))
            .map_err(|e| CliError::invalid(e.to_string()))?;
        let expected = commutation_factor_from_pair(&report.brauer);
        items.push(CheckItem {
            name,
            status: if same_factor(&wedge, &expected) {
                CheckStatus::Ok
            } else {
                CheckStatus::Mismatch("wedge oracle disagrees with the formula".into())
            },
        });
    }
    Ok(())
}

fn check_d_inner(
    spec: &GradingSpec,
    cap: usize,
    items: &mut Vec<CheckItem>,
) -> Result<(), CliError> {
    let rank = spec.rank();
    match half_spin_factor_pair(spec, cap) {
        Ok((oracle_plus, oracle_minus)) => {
            let (gamma_plus, gamma_minus) =
                gamma_hat_plus_d(spec).map_err(|e| CliError::invalid(e.to_string()))?;
            let direct = same_factor(&oracle_plus, &gamma_plus)
                && same_factor(&oracle_minus, &gamma_minus);
            let swapped = same_factor(&oracle_plus, &gamma_minus)
                && same_factor(&oracle_minus, &gamma_plus);
            items.push(CheckItem {
                name: "half-spin factor pair".into(),
                status: if direct || swapped {
                    CheckStatus::Ok
                } else {
                    CheckStatus::Mismatch(
                        "oracle pair disagrees with the computed pair".into(),
                    )
                },
            });
            // Report which assignment matched; flipping the
            // orientation flag flips this line whenever the two
            // factors differ.
            if direct || swapped {
                items.push(CheckItem {
                    name: format!(
                        "orientation assignment (oracle plus = declared gamma {})",
                        if direct { "plus" } else { "minus" }
                    ),
                    status: CheckStatus::Ok,
                });
            }
            // Half-spin Brauer classes of the last two fundamental
            // weights match the oracle pair, in some order.
            let br_minus = brauer_invariant(spec, &fundamental(rank, rank - 2))
                .map_err(|e| CliError::invalid(e.to_string()))?;
            let br_plus = brauer_invariant(spec, &fundamental(rank, rank - 1))
                .map_err(|e| CliError::invalid(e.to_string()))?;
            let f_minus = commutation_factor_from_pair(&br_minus.brauer);
            let f_plus = commutation_factor_from_pair(&br_plus.brauer);
            let ok = (same_factor(&oracle_plus, &f_plus) && same_factor(&oracle_minus, &f_minus))
                || (same_factor(&oracle_plus, &f_minus)
                    && same_factor(&oracle_minus, &f_plus));
            items.push(CheckItem {
                name: "half-spin weight Brauer classes".into(),
                status: if ok {
                    CheckStatus::Ok
                } else {
                    CheckStatus::Mismatch(
                        "half-spin classes disagree with the oracle pair".into(),
                    )
                },
            });
        }
        Err(e) => items.push(CheckItem {
            name: "half-spin factor pair".into(),
            status: CheckStatus::Skipped(e.to_string()),
        }),
    }
    Ok(())
}

fn check_d_outer(
    spec: &GradingSpec,
    cap: usize,
    items: &mut Vec<CheckItem>,
) -> Result<(), CliError> {
    match d_outer_quotient_factor_pair(spec, cap) {
        Ok((f_plus, f_minus)) => match gamma_hat_0_d_outer(spec) {
            Ok(gamma0) => {
                let ok = same_factor(&f_plus, &gamma0) || same_factor(&f_minus, &gamma0);
                items.push(CheckItem {
                    name: "asymmetric-weight factor on the quotient".into(),
                    status: if ok {
                        CheckStatus::Ok
                    } else {
                        CheckStatus::Mismatch(
                            "quotient spin factor disagrees with the computed factor".into(),
                        )
                    },
                });
            }
            Err(e) => items.push(CheckItem {
                name: "asymmetric-weight factor on the quotient".into(),
                status: CheckStatus::Skipped(e.to_string()),
            }),
        },
        Err(e) => items.push(CheckItem {
            name: "asymmetric-weight factor on the quotient".into(),
            status: CheckStatus::Skipped(e.to_string()),
        }),
    }
    match d_outer_cross_terms_match(spec, cap) {
        Ok(Some(true)) => items.push(CheckItem {
            name: "cross-term commutators against the support bicharacter".into(),
            status: CheckStatus::Ok,
        }),
        Ok(Some(false)) => items.push(CheckItem {
            name: "cross-term commutators against the support bicharacter".into(),
            status: CheckStatus::Mismatch(
                "cross terms disagree with the support bicharacter".into(),
            ),
        }),
        Ok(None) => items.push(CheckItem {
            name: "cross-term commutators against the support bicharacter".into(),
            status: CheckStatus::Skipped("no generator pair of opposite parity".into()),
        }),
        Err(e) => items.push(CheckItem {
            name: "cross-term commutators against the support bicharacter".into(),
            status: CheckStatus::Skipped(e.to_string()),
        }),
    }
    Ok(())
}

fn cmd_check(
    path: &PathBuf,
    max_dim: Option<usize>,
    format: Format,
) -> Result<(i32, String), CliError> {
    let (doc, spec) = load_valid_spec(path)?;
    let cap = max_dim.or(doc.oracle_cap).unwrap_or(DEFAULT_DIM_CAP);
    let mut items: Vec<CheckItem> = Vec::new();
    match &spec {
        GradingSpec::AInner { .. } => check_a_inner(&spec, &mut items)?,
        GradingSpec::AOuter { .. } => check_a_outer(&spec, &mut items)?,
        GradingSpec::B { .. } => check_b(&spec, cap, &mut items)?,
        GradingSpec::C { .. } => check_c(&spec, &mut items)?,
        GradingSpec::DInner { .. } => check_d_inner(&spec, cap, &mut items)?,
        GradingSpec::DOuter { .. } => check_d_outer(&spec, cap, &mut items)?,
    }
    let failed = items
        .iter()
        .any(|i| matches!(i.status, CheckStatus::Mismatch(_)));
    let out = match format {
        Format::Json => {
            let rows: Vec<Value> = items
                .iter()
                .map(|i| match &i.status {
                    CheckStatus::Ok => json!({ "check": i.name, "status": "ok" }),
                    CheckStatus::Skipped(r) => {
                        json!({ "check": i.name, "status": "skipped", "reason": r })
                    }
                    CheckStatus::Mismatch(r) => {
                        json!({ "check": i.name, "status": "mismatch", "reason": r })
                    }
                })
                .collect();
            let v = json!({
                "status": if failed { "mismatch" } else { "ok" },
                "checks": rows,
            });
            format!("{}\n", v)
        }
        Format::Text => {
            let mut out = String::new();
            for i in &items {
                match &i.status {
                    CheckStatus::Ok => {
                        let _ = writeln!(out, "ok: {}", i.name);
                    }
                    CheckStatus::Skipped(r) => {
                        let _ = writeln!(out, "skipped: {} ({})", i.name, r);
                    }
                    CheckStatus::Mismatch(r) => {
                        let _ = writeln!(out, "MISMATCH: {} ({})", i.name, r);
                    }
                }
            }
            let _ = writeln!(out, "{}", if failed { "mismatch" } else { "all checks passed" });
            out
        }
    };
    Ok((if failed { 2 } else { 0 }, out))
}
