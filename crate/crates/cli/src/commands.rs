//! Subcommand bodies. Each writes its whole result to `out`, so the same
//! code backs the binary and the tests.

use std::fmt;
use std::io::{self, Write};

use clap::ValueEnum;
use num_bigint::BigUint;
use serde_json::{json, Value};

use ratcount::{
    bcf_expand, binary_expand, binary_prefix, blocks_encode, cf_expand, dyadic_at,
    dyadic_odometer_map, index_of_positive, index_of_unit, positive_at, qmark_inverse,
    question_mark, run_suites, unit_at, Dyadic, EnumIndex, Error, IntervalMap, MapRegistry,
    Notation, OrbitIter, QmarkRegistry, Rational, SuiteRegistry,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum System {
    Cf,
    Bcf,
    Binary,
    Blocks,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Unit,
    Positive,
    Dyadic,
}

#[derive(Debug)]
pub enum Failure {
    /// Bad input, or a value outside a domain.
    Input(Error),
    Usage(String),
    /// Some identity does not hold.
    Verification(String),
    Io(io::Error),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(e) => e.fmt(f),
            Failure::Usage(m) | Failure::Verification(m) => f.write_str(m),
            Failure::Io(e) => e.fmt(f),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(e) => Failure::Io(e),
            other => Failure::Usage(format!("csv: {other:?}")),
        }
    }
}

type Outcome = Result<(), Failure>;

fn json_line(out: &mut dyn Write, v: &Value) -> Outcome {
    serde_json::to_writer(&mut *out, v).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn csv_rows<const N: usize>(
    out: &mut dyn Write,
    header: [&str; N],
    rows: impl IntoIterator<Item = [String; N]>,
) -> Outcome {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn parse_rational(s: &str) -> Result<Rational, Failure> {
    Ok(s.parse::<Rational>()?)
}

fn bits_text(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Exact expansion of `x`, as the value printed by the text grammar and the
/// JSON document of the same type.
enum Expansion {
    Exact(Notation),
    /// The first `depth` digits of an infinite binary expansion.
    Truncated(Vec<bool>),
}

impl Expansion {
    fn text(&self) -> String {
        match self {
            Expansion::Exact(n) => n.to_string(),
            Expansion::Truncated(bits) => format!("0.{}...", bits_text(bits)),
        }
    }

    fn json(&self) -> Value {
        match self {
            Expansion::Exact(Notation::Cf(e)) => json!(e),
            Expansion::Exact(Notation::Bcf(e)) => json!(e),
            Expansion::Exact(Notation::Binary(w)) => json!(w),
            Expansion::Exact(Notation::Blocks(s)) => json!(s),
            Expansion::Truncated(bits) => json!({ "bits": bits_text(bits), "truncated": true }),
        }
    }
}

fn system_name(s: System) -> &'static str {
    match s {
        System::Cf => "cf",
        System::Bcf => "bcf",
        System::Binary => "binary",
        System::Blocks => "blocks",
    }
}

fn expansion_of(x: &Rational, system: System, depth: Option<usize>) -> Result<Expansion, Failure> {
    let exact = match system {
        System::Cf => Notation::Cf(cf_expand(x)?),
        System::Bcf => Notation::Bcf(bcf_expand(x)?),
        System::Binary | System::Blocks => {
            let word = match Dyadic::try_from(x) {
                Ok(d) => binary_expand(&d)?,
                Err(_) => {
                    return match (system, depth) {
                        (System::Binary, Some(depth)) => {
                            Ok(Expansion::Truncated(binary_prefix(x, depth)?))
                        }
                        (System::Binary, None) => Err(Failure::Usage(format!(
                            "{x} is not dyadic; its binary expansion is infinite, pass --depth to truncate it"
                        ))),
                        _ => Err(Failure::Usage(format!(
                            "{x} is not dyadic; block codes are only exact for dyadics"
                        ))),
                    };
                }
            };
            if system == System::Binary {
                Notation::Binary(word)
            } else {
                Notation::Blocks(blocks_encode(&word))
            }
        }
    };
    Ok(Expansion::Exact(exact))
}

fn print_expansion(
    out: &mut dyn Write,
    fmt: Format,
    x: &Rational,
    system: System,
    e: &Expansion,
) -> Outcome {
    match fmt {
        Format::Text => writeln!(out, "{}", e.text())?,
        Format::Json => json_line(out, &e.json())?,
        Format::Csv => csv_rows(
            out,
            ["x", "system", "expansion"],
            [[x.to_string(), system_name(system).to_string(), e.text()]],
        )?,
    }
    Ok(())
}

pub fn expand(
    out: &mut dyn Write,
    fmt: Format,
    x: &str,
    system: System,
    depth: Option<usize>,
) -> Outcome {
    let x = parse_rational(x)?;
    let e = expansion_of(&x, system, depth)?;
    print_expansion(out, fmt, &x, system, &e)
}

fn parse_notation(s: &str) -> Result<Notation, Failure> {
    // JSON documents are accepted as well as the text grammars
    if s.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(s)
            .map_err(|e| Failure::Usage(format!("invalid JSON expansion {s:?}: {e}")))?;
        if v.get("truncated") == Some(&Value::Bool(true)) {
            return Err(Failure::Usage(format!(
                "{s} is a truncated prefix, not an exact value"
            )));
        }
        let parsed = if v.get("cf").is_some() {
            serde_json::from_value(v).map(Notation::Cf)
        } else if v.get("bcf_head").is_some() {
            serde_json::from_value(v).map(Notation::Bcf)
        } else if v.get("bits").is_some() {
            serde_json::from_value(v).map(Notation::Binary)
        } else if v.get("blocks").is_some() {
            serde_json::from_value(v).map(Notation::Blocks)
        } else {
            return Err(Failure::Usage(format!(
                "JSON expansion {s:?} needs one of the keys cf, bcf_head, bits, blocks"
            )));
        };
        return parsed.map_err(|e| Failure::Usage(format!("invalid JSON expansion {s:?}: {e}")));
    }
    Ok(s.parse::<Notation>()?)
}

pub fn convert(out: &mut dyn Write, fmt: Format, expansion: &str, to: System) -> Outcome {
    let x = parse_notation(expansion)?.value();
    let e = expansion_of(&x, to, None)?;
    print_expansion(out, fmt, &x, to, &e)
}

pub fn eval(out: &mut dyn Write, fmt: Format, expansion: &str) -> Outcome {
    let n = parse_notation(expansion)?;
    let x = n.value();
    match fmt {
        Format::Text => writeln!(out, "{x}")?,
        Format::Json => json_line(out, &json!({ "expansion": n.to_string(), "value": x }))?,
        Format::Csv => csv_rows(
            out,
            ["expansion", "value"],
            [[n.to_string(), x.to_string()]],
        )?,
    }
    Ok(())
}

fn lookup_map(name: &str) -> Result<std::sync::Arc<dyn IntervalMap>, Failure> {
    Ok(MapRegistry::builtin().get(name)?)
}

pub fn orbit(out: &mut dyn Write, fmt: Format, map: &str, x: &str, steps: u64) -> Outcome {
    let map = lookup_map(map)?;
    let x = parse_rational(x)?;
    let points = OrbitIter::new(map.as_ref(), x).take(steps as usize + 1);
    match fmt {
        Format::Text => {
            for p in points {
                writeln!(out, "{}", p?)?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["step", "value"])?;
            for (i, p) in points.enumerate() {
                w.write_record([i.to_string(), p?.to_string()])?;
            }
            w.flush()?;
        }
        Format::Json => {
            let values: Vec<Rational> = points.collect::<ratcount::Result<_>>()?;
            json_line(out, &json!({ "map": map.name(), "orbit": values }))?;
        }
    }
    Ok(())
}

fn parse_index(s: &str) -> Result<EnumIndex, Failure> {
    Ok(s.parse::<EnumIndex>()?)
}

pub fn enumerate(
    out: &mut dyn Write,
    fmt: Format,
    target: Target,
    from: &str,
    count: u64,
) -> Outcome {
    let start = parse_index(from)?;
    // closed form at the first index, then the map itself
    let (seed, step): (Rational, fn(&Rational) -> Rational) = match target {
        Target::Positive => (positive_at(&start), |x| ratcount::maps::Newman.eval(x)),
        Target::Unit => (unit_at(&start), |x| ratcount::maps::NewmanReturn.eval(x)),
        Target::Dyadic => (dyadic_at(&start).to_rational(), |x| {
            dyadic_odometer_map(x).expect("odometer points stay in [0,1)")
        }),
    };
    let values = std::iter::successors(Some(seed), |x| Some(step(x)))
        .take(count as usize)
        .enumerate()
        .map(|(i, x)| (&start.0 + BigUint::from(i), x));
    match fmt {
        Format::Text => {
            for (n, x) in values {
                writeln!(out, "{n}\t{x}")?;
            }
        }
        Format::Csv => csv_rows(
            out,
            ["n", "value"],
            values.map(|(n, x)| [n.to_string(), x.to_string()]),
        )?,
        Format::Json => {
            let rows: Vec<Value> = values
                .map(|(n, x)| json!({ "n": EnumIndex(n), "value": x }))
                .collect();
            json_line(out, &Value::Array(rows))?;
        }
    }
    Ok(())
}

pub fn index_of(out: &mut dyn Write, fmt: Format, x: &str, target: Target) -> Outcome {
    let value = parse_rational(x)?;
    let n = match target {
        Target::Positive => index_of_positive(&value)?,
        Target::Unit => index_of_unit(&value)?,
        Target::Dyadic => {
            let word = binary_expand(&Dyadic::try_from(&value)?)?;
            let mut n = BigUint::default();
            for &b in word.bits().iter().rev() {
                n <<= 1;
                if b {
                    n += 1u32;
                }
            }
            EnumIndex(n)
        }
    };
    match fmt {
        Format::Text => writeln!(out, "{n}")?,
        Format::Json => json_line(out, &json!({ "value": value, "n": n }))?,
        Format::Csv => csv_rows(out, ["value", "n"], [[value.to_string(), n.to_string()]])?,
    }
    Ok(())
}

/// `0.bits`, with `1.0` for the one dyadic the word grammar cannot hold.
fn dyadic_bits(d: &Dyadic) -> String {
    match binary_expand(d) {
        Ok(w) => w.to_string(),
        Err(_) => "1.0".to_string(),
    }
}

pub fn qmark(out: &mut dyn Write, fmt: Format, x: &str, algo: &str) -> Outcome {
    let algorithm = QmarkRegistry::builtin().get(algo)?;
    let x = parse_rational(x)?;
    let d = question_mark(algorithm.as_ref(), &x)?;
    let bits = dyadic_bits(&d);
    match fmt {
        Format::Text => writeln!(out, "{d}\t{bits}")?,
        Format::Json => json_line(
            out,
            &json!({ "x": x, "algo": algorithm.name(), "value": d, "binary": bits }),
        )?,
        Format::Csv => csv_rows(
            out,
            ["x", "value", "binary"],
            [[x.to_string(), d.to_string(), bits]],
        )?,
    }
    Ok(())
}

pub fn qmark_inv(out: &mut dyn Write, fmt: Format, d: &str) -> Outcome {
    let d: Dyadic = d.parse()?;
    let x = if d == Dyadic::one() {
        Rational::one()
    } else {
        qmark_inverse(&d)?
    };
    match fmt {
        Format::Text => writeln!(out, "{x}")?,
        Format::Json => json_line(out, &json!({ "dyadic": d, "value": x }))?,
        Format::Csv => csv_rows(out, ["dyadic", "value"], [[d.to_string(), x.to_string()]])?,
    }
    Ok(())
}

pub fn graph_data(
    out: &mut dyn Write,
    fmt: Format,
    map: &str,
    samples: u64,
    approx: bool,
) -> Outcome {
    if samples < 2 {
        return Err(Failure::Usage(format!(
            "--samples must be at least 2, got {samples}"
        )));
    }
    let map = lookup_map(map)?;
    let domain = map.domain();
    let points: Vec<(Rational, Rational)> = (0..samples)
        .map(|i| Rational::new(i, samples))
        .filter(|x| domain.contains(x))
        .map(|x| {
            let y = map.eval(&x);
            (x, y)
        })
        .collect();
    let show = |x: &Rational| {
        if approx {
            x.to_f64().to_string()
        } else {
            x.to_string()
        }
    };
    match fmt {
        Format::Json => {
            let rows: Vec<Value> = points
                .iter()
                .map(|(x, y)| {
                    if approx {
                        json!({ "x": x.to_f64(), "y": y.to_f64() })
                    } else {
                        json!({ "x": x, "y": y })
                    }
                })
                .collect();
            json_line(out, &json!({ "map": map.name(), "points": rows }))?;
        }
        // plot data is CSV in both remaining formats
        Format::Text | Format::Csv => csv_rows(
            out,
            ["x", "y"],
            points.iter().map(|(x, y)| [show(x), show(y)]),
        )?,
    }
    Ok(())
}

pub fn verify(out: &mut dyn Write, fmt: Format, suite: &str, bound: u64) -> Outcome {
    if bound < 1 {
        return Err(Failure::Usage("--bound must be at least 1".to_string()));
    }
    let reports = run_suites(&SuiteRegistry::builtin(), suite, bound)?;
    match fmt {
        Format::Text => {
            for r in &reports {
                writeln!(out, "{}: checked {} identities", r.suite, r.checked())?;
                for f in &r.families {
                    writeln!(out, "  {}: {}", f.identity, f.checked)?;
                }
                if let Some(c) = &r.failure {
                    writeln!(out, "  FAILED: {c}")?;
                }
            }
        }
        Format::Json => {
            let docs: Vec<Value> = reports
                .iter()
                .map(|r| {
                    json!({
                        "suite": r.suite,
                        "bound": bound,
                        "checked": r.checked(),
                        "passed": r.passed(),
                        "families": r.families.iter()
                            .map(|f| json!({ "identity": f.identity, "checked": f.checked }))
                            .collect::<Vec<_>>(),
                        "counterexample": r.failure.as_ref().map(|c| json!({
                            "identity": c.identity, "input": c.input, "lhs": c.lhs, "rhs": c.rhs,
                        })),
                    })
                })
                .collect();
            json_line(out, &Value::Array(docs))?;
        }
        Format::Csv => csv_rows(
            out,
            ["suite", "identity", "checked", "status"],
            reports.iter().flat_map(|r| {
                let failed = r.failure.as_ref().map(|c| c.identity);
                r.families.iter().map(move |f| {
                    let status = if failed == Some(f.identity) {
                        "fail"
                    } else {
                        "ok"
                    };
                    [
                        r.suite.clone(),
                        f.identity.to_string(),
                        f.checked.to_string(),
                        status.to_string(),
                    ]
                })
            }),
        )?,
    }
    match reports.iter().find_map(|r| r.failure.as_ref()) {
        Some(c) => Err(Failure::Verification(c.to_string())),
        None => Ok(()),
    }
}
