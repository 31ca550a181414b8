//! The `dmcc` command line.
//!
//! Exit codes: 0 success, 1 the data fails the request (validation errors,
//! an unquotable usage, an unknown SLA term), 2 usage or parse error, 3 I/O
//! error. Results go to standard output, problems to standard error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rust_decimal::Decimal;

use crate::broker::Broker;
use crate::model::{self, to_json_envelope, Quantity};
use crate::pricing::{money, quote, LineKind, UsageRequest};
use crate::query::{evaluate, parse_query};
use crate::rdf::{parse_turtle, serialize_ntriples, serialize_turtle, BlankNode, Graph, Term, Triple};
use crate::sla::{compensation_amount, compensation_for, Observation};
use crate::validate::{validate, validate_strict};
use crate::vocab::{self, dmcc, registry};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExitStatus(pub i32);

impl ExitStatus {
    pub const SUCCESS: ExitStatus = ExitStatus(0);
    pub const FAILURE: ExitStatus = ExitStatus(1);
    pub const USAGE: ExitStatus = ExitStatus(2);
    pub const IO: ExitStatus = ExitStatus(3);

    pub fn code(self) -> i32 {
        self.0
    }
}

#[derive(Parser, Debug)]
#[command(name = "dmcc", version, about = "Read, check and compare Linked-Data descriptions of cloud data-mining services")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Syntax {
    Turtle,
    Ntriples,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Re-serialize the merged input graph.
    Convert {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "turtle")]
        to: Syntax,
    },
    /// Check the input against the service schema.
    Validate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Also warn about predicates and classes outside the vocabulary.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        json: bool,
    },
    /// Print the typed description of one provider, or of all of them.
    Extract {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        provider: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Run a SELECT query.
    Query {
        #[arg(long = "file", short = 'f')]
        query: PathBuf,
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Compensation owed for an observed SLA metric.
    SlaComp {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Service node, or the agreement node itself.
        #[arg(long)]
        service: String,
        #[arg(long)]
        term: String,
        #[arg(long, allow_negative_numbers = true)]
        value: Decimal,
        #[arg(long, default_value = "percent")]
        unit: String,
        /// Bill the compensation applies to, for a money amount.
        #[arg(long)]
        billed: Option<Decimal>,
        #[arg(long)]
        json: bool,
    },
    /// Price a usage against one plan.
    Quote {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        plan: String,
        #[arg(long, allow_negative_numbers = true)]
        hours: Option<Decimal>,
        /// Further usage as AMOUNT:UNIT, e.g. 20:E34.
        #[arg(long = "usage", value_name = "AMOUNT:UNIT")]
        usage: Vec<String>,
        #[arg(long)]
        instance: Option<String>,
        #[arg(long)]
        region: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Compare providers offering a function.
    Broker {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        function: String,
        #[arg(long, allow_negative_numbers = true)]
        hours: Option<Decimal>,
        #[arg(long = "usage", value_name = "AMOUNT:UNIT")]
        usage: Vec<String>,
        #[arg(long)]
        region: Option<String>,
        /// Treat ALIAS as another spelling of NAME.
        #[arg(long = "alias", value_name = "ALIAS=NAME")]
        aliases: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Print the vocabulary manifest.
    Vocab,
}

struct Failure(ExitStatus, String);

type Outcome = Result<ExitStatus, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure(ExitStatus::USAGE, msg.into())
}

fn data(msg: impl Into<String>) -> Failure {
    Failure(ExitStatus::FAILURE, msg.into())
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { ExitStatus::USAGE } else { ExitStatus::SUCCESS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "dmcc: {msg}");
            code
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(|e| Failure(ExitStatus::IO, format!("writing output: {e}")))
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Convert { files, to } => {
            let g = load(&files)?;
            emit(
                out,
                &match to {
                    Syntax::Turtle => serialize_turtle(&g),
                    Syntax::Ntriples => serialize_ntriples(&g),
                },
            )?;
            Ok(ExitStatus::SUCCESS)
        }
        Command::Validate { files, strict, json } => {
            let g = load(&files)?;
            let report = if strict { validate_strict(&g) } else { validate(&g) };
            emit(out, &if json { report.to_json() } else { report.to_text() })?;
            Ok(if report.has_errors() { ExitStatus::FAILURE } else { ExitStatus::SUCCESS })
        }
        Command::Extract { files, provider, json } => {
            let g = load(&files)?;
            let single = provider.is_some();
            let nodes = match provider {
                Some(p) => vec![resolve_node(&g, &p)?],
                None => model::list_providers(&g),
            };
            let providers =
                nodes.iter().map(|n| model::extract_provider(&g, n)).collect::<Result<Vec<_>, _>>().map_err(|e| data(e.to_string()))?;
            let text = if json {
                let mut s = if single {
                    to_json_envelope("provider", &providers[0])
                } else {
                    to_json_envelope("providers", &providers)
                };
                s.push('\n');
                s
            } else {
                providers.iter().map(outline).collect::<Vec<_>>().join("\n")
            };
            emit(out, &text)?;
            Ok(ExitStatus::SUCCESS)
        }
        Command::Query { query, files, json } => {
            let text = std::fs::read_to_string(&query).map_err(|e| Failure(ExitStatus::IO, format!("{}: {e}", query.display())))?;
            let q = parse_query(&text).map_err(|e| usage(format!("{}: {e}", query.display())))?;
            let g = load(&files)?;
            let rs = evaluate(&g, &q);
            emit(out, &if json { rs.to_json() } else { rs.to_table() })?;
            Ok(ExitStatus::SUCCESS)
        }
        Command::SlaComp { files, service, term, value, unit, billed, json } => {
            let g = load(&files)?;
            let node = resolve_node(&g, &service)?;
            let sla_node = g.object(&node, &vocab::term(dmcc::HAS_SERVICE_COMMITMENT)).cloned().unwrap_or(node);
            let sla = model::extract_sla(&g, &sla_node).map_err(|e| data(e.to_string()))?;
            let obs = Observation { term_name: term, value, unit };
            let result = compensation_for(&sla, &obs).map_err(|e| data(e.to_string()))?;
            let text = if json {
                to_json_envelope("compensation", &result.to_json(billed)) + "\n"
            } else {
                let t = crate::sla::find_term(&sla, &obs.term_name).expect("term found above");
                let mut s = match (&result.matched, &result.compensation) {
                    (Some(i), Some(c)) => {
                        let d = &t.definitions[*i];
                        let what = match c.kind {
                            model::CompensationKind::PercentOfBill => format!("{}% of the bill", c.amount),
                            model::CompensationKind::ServiceCredits => format!("{} service credits", c.amount),
                        };
                        format!("{} {} falls in [{}, {}): {what}\n", t.name, obs.value, d.min, d.max)
                    }
                    _ => format!("{} {} is in no compensated range\n", t.name, obs.value),
                };
                if let Some(b) = billed {
                    s.push_str(&format!("owed on a bill of {}: {}\n", money(b), money(compensation_amount(&result, b))));
                }
                s
            };
            emit(out, &text)?;
            Ok(ExitStatus::SUCCESS)
        }
        Command::Quote { files, plan, hours, usage: extra, instance, region, json } => {
            let g = load(&files)?;
            let plan_node = resolve_node(&g, &plan)?;
            let plan = model::extract_pricing(&g, &plan_node).map_err(|e| data(e.to_string()))?;
            let mut req = usage_request(hours, &extra)?;
            if let Some(i) = instance {
                req.instance = Some(resolve_node(&g, &i)?);
            }
            req.region = region;
            let cost = quote(&plan, &req).map_err(|e| data(e.to_string()))?;
            let text = if json {
                to_json_envelope("quote", &cost.to_json()) + "\n"
            } else {
                let mut s = format!("{} ({})\n", cost.plan_name, cost.plan);
                for item in &cost.items {
                    match item.kind {
                        LineKind::Usage => s.push_str(&format!(
                            "  {} {} x {} = {}\n",
                            item.billed_quantity,
                            item.unit,
                            item.unit_price,
                            money(item.subtotal)
                        )),
                        LineKind::Cap => s.push_str(&format!("  cap adjustment {}\n", money(item.subtotal))),
                    }
                }
                for a in &cost.allowance_applied {
                    s.push_str(&format!("  included: {} {}\n", a.amount, a.unit));
                }
                s.push_str(&format!("total {} {}\n", money(cost.total), cost.currency));
                s
            };
            emit(out, &text)?;
            Ok(ExitStatus::SUCCESS)
        }
        Command::Broker { files, function, hours, usage: extra, region, aliases, json } => {
            let g = load(&files)?;
            let mut req = usage_request(hours, &extra)?;
            req.region = region;
            let mut broker = Broker::new();
            for a in &aliases {
                let (alias, name) = a.split_once('=').ok_or_else(|| usage(format!("--alias expects ALIAS=NAME, got {a:?}")))?;
                broker = broker.alias(alias, name);
            }
            let offers = broker.compare(&g, &function, &req);
            let text = if json {
                let rows: Vec<_> = offers.iter().map(|o| o.to_json()).collect();
                to_json_envelope("offers", &rows) + "\n"
            } else if offers.is_empty() {
                format!("no provider offers {function:?}\n")
            } else {
                let mut s = String::new();
                for (i, o) in offers.iter().enumerate() {
                    let tail = match (&o.quote, &o.error) {
                        (Some(q), _) => format!("{} {} ({})", money(q.total), q.currency, q.plan_name),
                        (None, Some(e)) => format!("not quotable: {e}"),
                        (None, None) => String::new(),
                    };
                    s.push_str(&format!("{}. {} / {}: {tail}\n", i + 1, o.provider.name, o.service.name));
                }
                s
            };
            emit(out, &text)?;
            Ok(ExitStatus::SUCCESS)
        }
        Command::Vocab => {
            emit(out, &registry().manifest_json())?;
            Ok(ExitStatus::SUCCESS)
        }
    }
}

fn usage_request(hours: Option<Decimal>, extra: &[String]) -> Result<UsageRequest, Failure> {
    let mut req = UsageRequest::new();
    if let Some(h) = hours {
        req.quantities.push(Quantity::new(h, "HRS"));
    }
    for u in extra {
        let (amount, unit) = u.split_once(':').ok_or_else(|| usage(format!("--usage expects AMOUNT:UNIT, got {u:?}")))?;
        let amount: Decimal = amount.trim().parse().map_err(|_| usage(format!("bad amount in --usage {u:?}")))?;
        req.quantities.push(Quantity::new(amount, unit.trim()));
    }
    if req.quantities.is_empty() {
        return Err(usage("give --hours or at least one --usage"));
    }
    Ok(req)
}

fn outline(p: &model::ServiceProvider) -> String {
    let mut s = format!("{} ({})\n", if p.name.is_empty() { "unnamed provider" } else { &p.name }, p.node);
    for svc in &p.services {
        s.push_str(&format!("  service {}", svc.node));
        if let Some(l) = &svc.label {
            s.push_str(&format!(" {l:?}"));
        }
        s.push('\n');
        for f in &svc.functions {
            s.push_str(&format!("    function {} ({} parameters, {} outputs)\n", f.name, f.parameters.len(), f.outputs.len()));
        }
        if let Some(ip) = &svc.interaction {
            s.push_str(&format!(
                "    interaction {} {}\n",
                ip.http_method.as_deref().unwrap_or("?"),
                ip.url_template.as_deref().unwrap_or("?")
            ));
        }
        if let Some(sla) = &svc.sla {
            for t in &sla.terms {
                s.push_str(&format!("    sla term {} ({} ranges)\n", t.name, t.definitions.len()));
            }
        }
        if svc.authentication.is_some() {
            s.push_str("    authentication\n");
        }
        for plan in &svc.pricing {
            s.push_str(&format!("    plan {:?} ({} compounds, {})\n", plan.name, plan.compounds.len(), plan.currency));
        }
    }
    s
}

/// Reads and merges the inputs. With several files each file's blank nodes
/// are renamed `{stem}.{label}` so equal labels stay apart.
fn load(files: &[PathBuf]) -> Result<Graph, Failure> {
    let mut parsed = Vec::new();
    for f in files {
        let text = std::fs::read_to_string(f).map_err(|e| Failure(ExitStatus::IO, format!("{}: {e}", f.display())))?;
        let g = parse_turtle(&text).map_err(|e| match e.position() {
            Some((line, col)) => usage(format!("{}:{line}:{col}: {e}", f.display())),
            None => usage(format!("{}: {e}", f.display())),
        })?;
        parsed.push((f.clone(), g));
    }
    if parsed.len() == 1 {
        return Ok(parsed.pop().unwrap().1);
    }
    let mut used = std::collections::BTreeSet::new();
    let mut merged = Graph::with_prefixes(registry().prefixes().clone());
    for (path, g) in &parsed {
        let base = stem(path);
        let mut ns = base.clone();
        let mut n = 2;
        while !used.insert(ns.clone()) {
            ns = format!("{base}_{n}");
            n += 1;
        }
        for (p, iri) in g.prefixes().iter() {
            if merged.prefixes().get(p).is_none() {
                let _ = merged.prefixes_mut().insert(p, iri.clone());
            }
        }
        for t in g.iter() {
            merged.insert(namespaced(t, &ns));
        }
    }
    Ok(merged)
}

fn stem(path: &Path) -> String {
    let raw = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let mut s: String = raw.chars().map(|c| if c.is_alphanumeric() || matches!(c, '_' | '-') { c } else { '_' }).collect();
    if s.is_empty() || !s.starts_with(|c: char| c.is_alphanumeric() || c == '_') {
        s.insert(0, 'f');
    }
    s
}

/// Merges graphs the way the CLI does, naming each by its position's stem.
pub fn merge_named(graphs: &[(&str, &Graph)]) -> Graph {
    let mut merged = Graph::with_prefixes(registry().prefixes().clone());
    for (ns, g) in graphs {
        for t in g.iter() {
            merged.insert(namespaced(t, ns));
        }
    }
    merged
}

fn namespaced(t: &Triple, ns: &str) -> Triple {
    let rename = |term: &Term| match term {
        Term::Blank(b) => Term::Blank(BlankNode::new(format!("{ns}.{}", b.label())).expect("stem and label are valid")),
        other => other.clone(),
    };
    Triple::new(rename(t.subject()), t.predicate().clone(), rename(t.object())).expect("renaming keeps positions")
}

/// Accepts `_:label`, a bare label, `prefix:local`, `<iri>` or an absolute
/// IRI. A bare label also finds `{stem}.label` in a merged graph when that
/// is unambiguous.
fn resolve_node(g: &Graph, text: &str) -> Result<Term, Failure> {
    let text = text.trim();
    let described = |t: &Term| g.describes(t);
    if let Some(iri) = text.strip_prefix('<').and_then(|s| s.strip_suffix('>')) {
        return Term::iri(iri).map_err(|e| usage(e.to_string())).and_then(|t| found(t, described));
    }
    let label = text.strip_prefix("_:").unwrap_or(text);
    if !text.starts_with("_:") && text.contains(':') {
        if let Some((p, l)) = text.split_once(':') {
            if let Some(iri) = g.prefixes().expand(p, l).or_else(|| registry().prefixes().expand(p, l)) {
                if let Ok(t) = Term::iri(iri) {
                    if described(&t) {
                        return Ok(t);
                    }
                }
            }
        }
        if let Ok(t) = Term::iri(text) {
            if described(&t) {
                return Ok(t);
            }
        }
    }
    if let Ok(t) = Term::blank(label) {
        if described(&t) {
            return Ok(t);
        }
    }
    let suffix = format!(".{label}");
    let hits: Vec<&Term> = g.blank_nodes().into_iter().filter(|b| b.as_blank().is_some_and(|b| b.label().ends_with(&suffix))).collect();
    match hits.as_slice() {
        [one] => Ok((*one).clone()),
        [] => Err(usage(format!("no node {text} in the input"))),
        many => Err(usage(format!(
            "{text} is ambiguous: {}",
            many.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", ")
        ))),
    }
}

fn found(t: Term, described: impl Fn(&Term) -> bool) -> Result<Term, Failure> {
    if described(&t) {
        Ok(t)
    } else {
        Err(usage(format!("no node {t} in the input")))
    }
}
