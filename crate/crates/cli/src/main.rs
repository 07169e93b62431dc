use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use critstrip::afe::{delta_hilbert, delta_series, delta_twisted, real_character, verify_identity, AFEConfig, CoefficientSeries, DEFAULT_CUTOFF};
use critstrip::certificates::{
    certify_gld, certify_halfint_central, certify_hilbert, certify_modular, certify_siegel, coprime_rank_certificate,
    rank_certificate, CertConfig, Certificate, ModularBranch, Verdict,
};
use critstrip::error::Error;
use critstrip::lfamilies::{closed_form_higher, closed_form_higher_exact, closed_form_sum, closed_form_sum_exact, CriticalPoint, ExactComplex, FamilyDatum, FamilyKind};
use critstrip::precision::{parse_rational, polygamma, PolygammaOrder, Precision};
use critstrip::symbolic::{reduce_psi, IntegerSet};

/// Closed forms, numerical checks and certificates for L'/L inside the critical strip.
///
/// Exit status: 0 pass or Certified, 1 fail or NotCertified, 2 usage error,
/// 3 pole, 4 malformed input file, 5 theorem hypothesis not met, 6 numerical
/// failure, 7 I/O error.
#[derive(Parser, Debug)]
#[command(name = "critstrip", version)]
struct Cli {
    /// Working precision in bits (at least 64).
    #[arg(long, global = true, default_value_t = 128)]
    precision: usize,
    /// Identity tolerance 2^-TOL; at most precision/2. Defaults to precision/4.
    #[arg(long = "tol", global = true)]
    tolerance_exponent: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Significant digits in text output.
    #[arg(long, global = true, default_value_t = 25)]
    digits: usize,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    JsonLines,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Polygamma ψ^(m)(z); with --exact, its reduction to constants.
    Psi {
        #[arg(long, default_value_t = 0)]
        m: u32,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long)]
        exact: bool,
    },
    /// Right-hand side of the identity for a family datum.
    Closedform {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, allow_hyphen_values = true)]
        s0: String,
        /// 0 for the first-derivative sum, m >= 1 for the order-(m+1) combination.
        #[arg(long, default_value_t = 0)]
        m: u32,
        #[arg(long)]
        exact: bool,
    },
    /// Checks the identity numerically from Fourier coefficients.
    Identity {
        /// Coefficient files; every file is checked at every s0.
        #[arg(long = "data", required = true)]
        data_paths: Vec<PathBuf>,
        #[arg(long, required = true, allow_hyphen_values = true)]
        s0: Vec<String>,
        #[arg(long, default_value_t = 0)]
        m: u32,
        #[arg(long, default_value_t = DEFAULT_CUTOFF)]
        cutoff: f64,
    },
    /// Non-vanishing certificates.
    Certify {
        #[command(subcommand)]
        which: CertifyCmd,
    },
    /// Rank of identity values over a set J of conductors, or over coprime points a/q.
    Rank {
        #[command(flatten)]
        family: FamilyArgs,
        /// Comma-separated conductors with property A.
        #[arg(long = "J", value_delimiter = ',')]
        j: Vec<u64>,
        #[arg(long, allow_hyphen_values = true)]
        s0: Option<String>,
        /// Coprime-point construction (modular family only).
        #[arg(long)]
        q: Option<u64>,
    },
    /// Writes a bundled coefficient series in the coefficient file format.
    GenData {
        #[arg(long, value_enum)]
        series: SeriesKind,
        /// Fundamental discriminant for the twist or the character.
        #[arg(long = "D", allow_hyphen_values = true)]
        d: Option<i64>,
        #[arg(long, default_value_t = 10_000)]
        nmax: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum CertifyCmd {
    Gld {
        #[arg(long = "N")]
        n: u64,
        /// Comma-separated local parameters.
        #[arg(long)]
        kappa: String,
        #[arg(long, allow_hyphen_values = true)]
        s0: String,
    },
    Modular {
        #[arg(long = "N")]
        n: u64,
        #[arg(long = "D", allow_hyphen_values = true, default_value_t = 1)]
        d: i64,
        #[arg(long)]
        k: String,
        #[arg(long, allow_hyphen_values = true)]
        s0: String,
        /// Use the k >= 5 variant with the weaker threshold.
        #[arg(long)]
        remark: bool,
    },
    Halfint {
        #[arg(long)]
        k: String,
        #[arg(long = "N")]
        n: u64,
    },
    Hilbert {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        n: u32,
        #[arg(long = "dF")]
        df: u64,
        #[arg(long = "normN", default_value_t = 1)]
        norm_n: u64,
        #[arg(long, allow_hyphen_values = true)]
        s0: String,
        /// Override a minimal discriminant, as DEGREE=VALUE.
        #[arg(long = "min-disc")]
        min_disc: Vec<String>,
    },
    Siegel {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        k: u64,
        #[arg(long, allow_hyphen_values = true)]
        s0: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SeriesKind {
    Delta,
    Twist,
    Character,
    Hilbert,
}

#[derive(Args, Debug, Default)]
struct FamilyArgs {
    /// Family datum file (key: value block); replaces the flags below.
    #[arg(long)]
    datum: Option<PathBuf>,
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    k: Option<String>,
    #[arg(long = "N")]
    level: Option<u64>,
    #[arg(long = "D", allow_hyphen_values = true)]
    disc: Option<i64>,
    #[arg(long)]
    kappa: Option<String>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long = "dF")]
    df: Option<u64>,
    #[arg(long = "normN")]
    norm_n: Option<u64>,
    #[arg(long)]
    g: Option<u32>,
}

enum Failure {
    Usage(String),
    Core(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Io(_) => 7,
            Failure::Core(e) => match e {
                Error::Pole(_) => 3,
                Error::Parse { .. } => 4,
                Error::Hypothesis(_) | Error::OutOfProvenRange(_) | Error::PropertyA(_) => 5,
                _ => 6,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) | Failure::Io(m) => m.clone(),
            Failure::Core(e) => e.to_string(),
        }
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

struct Out {
    format: Format,
    bits: usize,
    buf: String,
}

impl Out {
    fn emit(&mut self, command: &str, inputs: Value, result: Map<String, Value>, assumptions: &[String], text: String) {
        match self.format {
            Format::Text => {
                self.buf.push_str(&text);
                if !text.ends_with('\n') {
                    self.buf.push('\n');
                }
            }
            Format::JsonLines => {
                let mut rec = Map::new();
                rec.insert("command".into(), json!(command));
                rec.insert("inputs".into(), inputs);
                rec.extend(result);
                rec.insert("precision_bits".into(), json!(self.bits));
                rec.insert("assumptions".into(), json!(assumptions));
                self.buf.push_str(&Value::Object(rec).to_string());
                self.buf.push('\n');
            }
        }
    }
}

fn rational_arg(name: &str, s: &str) -> Res<BigRational> {
    parse_rational(s).ok_or_else(|| usage(format!("--{name}: `{s}` is not a rational number")))
}

fn point_arg(s: &str, prec: Precision) -> Res<CriticalPoint> {
    CriticalPoint::parse(s, prec).map_err(|_| usage(format!("--s0: cannot parse `{s}`")))
}

fn kappa_arg(s: &str) -> Res<Vec<ExactComplex>> {
    s.split(',').map(|t| t.parse::<ExactComplex>().map_err(|_| usage(format!("--kappa: cannot parse `{}`", t.trim())))).collect()
}

fn read_file(path: &PathBuf) -> Res<String> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

impl FamilyArgs {
    /// `conductor` fills in a missing level when the caller varies it anyway.
    fn datum(&self, conductor: Option<u64>) -> Res<FamilyDatum> {
        if let Some(p) = &self.datum {
            return Ok(FamilyDatum::parse_block(&read_file(p)?)?);
        }
        let fam = self.family.as_deref().ok_or_else(|| usage("give --family or --datum"))?;
        let kind: FamilyKind = fam.parse().map_err(|_| usage(format!("--family: unknown family `{fam}`")))?;
        let level = || self.level.or(conductor).ok_or_else(|| usage("--N is required"));
        let fd = match kind {
            FamilyKind::Gld => FamilyDatum::AutomorphicGLd {
                conductor: level()?,
                kappa: kappa_arg(self.kappa.as_deref().ok_or_else(|| usage("--kappa is required"))?)?,
            },
            FamilyKind::Modular => FamilyDatum::ModularTwisted {
                k: rational_arg("k", self.k.as_deref().ok_or_else(|| usage("--k is required"))?)?,
                level: level()?,
                disc: self.disc.unwrap_or(1),
            },
            FamilyKind::Hilbert => FamilyDatum::Hilbert {
                k: self.k.as_deref().ok_or_else(|| usage("--k is required"))?.parse().map_err(|_| usage("--k must be an integer"))?,
                n: self.n.ok_or_else(|| usage("--n is required"))?,
                df: self.df.ok_or_else(|| usage("--dF is required"))?,
                norm_n: self.norm_n.or(conductor).unwrap_or(1),
            },
            FamilyKind::Siegel => FamilyDatum::Siegel {
                g: self.g.ok_or_else(|| usage("--g is required"))?,
                k: self.k.as_deref().ok_or_else(|| usage("--k is required"))?.parse().map_err(|_| usage("--k must be an integer"))?,
            },
        };
        fd.validate()?;
        Ok(fd)
    }
}

fn datum_json(fd: &FamilyDatum) -> Value {
    let mut m = Map::new();
    for line in fd.to_text().lines() {
        if let Some((k, v)) = line.split_once(':') {
            m.insert(k.trim().to_string(), json!(v.trim()));
        }
    }
    Value::Object(m)
}

fn certificate_json(c: &Certificate, digits: usize) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("claim".into(), json!(c.claim.to_string()));
    m.insert("verdict".into(), json!(c.verdict.to_string()));
    match &c.rank {
        Some(r) => {
            m.insert("rank".into(), json!(r.rank));
            m.insert("guarantee".into(), json!(r.guarantee));
            m.insert("members".into(), json!(r.members.iter().map(|e| e.to_string()).collect::<Vec<_>>()));
            m.insert("psi_pairs".into(), json!(r.psi_pairs.iter().map(|s| s.to_string()).collect::<Vec<_>>()));
        }
        None => {
            m.insert("bound".into(), json!(c.bound.to_string()));
            m.insert("bound_value".into(), json!(c.bound_value.re().to_decimal(digits)));
            m.insert("margin".into(), json!(c.margin.to_decimal(digits)));
        }
    }
    if let Some(set) = &c.set {
        m.insert("set".into(), json!(set));
    }
    m
}

fn run(cli: &Cli, out: &mut Out) -> Res<u8> {
    let prec = Precision::new(cli.precision).map_err(|e| usage(e.to_string()))?;
    if let Some(t) = cli.tolerance_exponent {
        if t > cli.precision / 2 {
            return Err(usage(format!("--tol {t} exceeds precision/2 = {}", cli.precision / 2)));
        }
    }
    let digits = cli.digits.max(1);
    match &cli.cmd {
        Command::Psi { m, z, exact } => {
            let inputs = json!({"m": m, "z": z, "exact": exact});
            if *exact {
                let q = rational_arg("z", z)?;
                let e = reduce_psi(*m, &q)?;
                let v = e.eval(prec)?;
                let mut r = Map::new();
                r.insert("value".into(), json!(e.to_string()));
                r.insert("numeric".into(), json!(v.to_decimal(digits)));
                out.emit("psi", inputs, r, &[], format!("{e}\n= {}", v.to_decimal(digits)));
            } else {
                let zc = z.parse::<ExactComplex>().map_err(|_| usage(format!("--z: cannot parse `{z}`")))?.to_complex(prec);
                let v = polygamma(PolygammaOrder::new(*m), &zc)?;
                let mut r = Map::new();
                r.insert("value".into(), json!(v.to_decimal(digits)));
                out.emit("psi", inputs, r, &[], v.to_decimal(digits));
            }
            Ok(0)
        }
        Command::Closedform { family, s0, m, exact } => {
            let fd = family.datum(None)?;
            let sp = point_arg(s0, prec)?;
            let inputs = json!({"datum": datum_json(&fd), "s0": s0, "m": m, "exact": exact});
            let mut r = Map::new();
            let text = if *exact {
                let q = sp.as_rational().ok_or_else(|| usage("--exact needs a rational s0"))?;
                let e = if *m == 0 { closed_form_sum_exact(&fd, q)? } else { closed_form_higher_exact(&fd, q, *m)? };
                let v = e.eval(prec)?;
                r.insert("value".into(), json!(e.to_string()));
                r.insert("numeric".into(), json!(v.to_decimal(digits)));
                format!("{e}\n= {}", v.to_decimal(digits))
            } else {
                let v = if *m == 0 { closed_form_sum(&fd, &sp, prec)? } else { closed_form_higher(&fd, &sp, *m, prec)? };
                r.insert("value".into(), json!(v.to_decimal(digits)));
                v.to_decimal(digits)
            };
            out.emit("closedform", inputs, r, &[], text);
            Ok(0)
        }
        Command::Identity { data_paths, s0, m, cutoff } => {
            let mut cfg = AFEConfig::new(prec).with_cutoff(*cutoff).map_err(|e| usage(e.to_string()))?;
            cfg.tolerance_bits = cli.tolerance_exponent;
            let points = s0.iter().map(|s| point_arg(s, prec)).collect::<Res<Vec<_>>>()?;
            let mut all = true;
            for path in data_paths {
                let series = CoefficientSeries::parse(&read_file(path)?)?;
                for (text_s0, sp) in s0.iter().zip(&points) {
                    let rep = verify_identity(&series, sp, *m, &cfg)?;
                    all &= rep.pass;
                    let status = if rep.pass { "pass" } else { "fail" };
                    let inputs = json!({"data": path.display().to_string(), "s0": text_s0, "m": m, "cutoff": cutoff});
                    let mut r = Map::new();
                    r.insert("residual".into(), json!(rep.residual.to_decimal(6)));
                    r.insert("tolerance".into(), json!(rep.tolerance.to_decimal(6)));
                    r.insert("lhs".into(), json!(rep.lhs.to_decimal(digits)));
                    r.insert("rhs".into(), json!(rep.rhs.to_decimal(digits)));
                    r.insert("pass".into(), json!(rep.pass));
                    let text = format!(
                        "{status}  {}  s0={text_s0}  m={m}\n  numeric     {}\n  closed form {}\n  residual    {} (tolerance {})",
                        path.display(),
                        rep.lhs.to_decimal(digits),
                        rep.rhs.to_decimal(digits),
                        rep.residual.to_decimal(6),
                        rep.tolerance.to_decimal(6)
                    );
                    out.emit("identity", inputs, r, &[], text);
                }
            }
            Ok(if all { 0 } else { 1 })
        }
        Command::Certify { which } => {
            let mut cfg = CertConfig::new(prec);
            let (name, inputs, cert) = match which {
                CertifyCmd::Gld { n, kappa, s0 } => {
                    let fd = FamilyDatum::AutomorphicGLd { conductor: *n, kappa: kappa_arg(kappa)? };
                    let c = certify_gld(&fd, &point_arg(s0, prec)?, &cfg)?;
                    ("certify gld", json!({"N": n, "kappa": kappa, "s0": s0}), c)
                }
                CertifyCmd::Modular { n, d, k, s0, remark } => {
                    let fd = FamilyDatum::ModularTwisted { k: rational_arg("k", k)?, level: *n, disc: *d };
                    let branch = if *remark { ModularBranch::Remark } else { ModularBranch::Primary };
                    let c = certify_modular(&fd, &rational_arg("s0", s0)?, branch, &cfg)?;
                    ("certify modular", json!({"N": n, "D": d, "k": k, "s0": s0, "remark": remark}), c)
                }
                CertifyCmd::Halfint { k, n } => {
                    let c = certify_halfint_central(&rational_arg("k", k)?, *n, &cfg)?;
                    ("certify halfint", json!({"k": k, "N": n}), c)
                }
                CertifyCmd::Hilbert { k, n, df, norm_n, s0, min_disc } => {
                    for item in min_disc {
                        let (deg, v) = item.split_once('=').ok_or_else(|| usage(format!("--min-disc: expected DEGREE=VALUE, got `{item}`")))?;
                        let deg: u32 = deg.trim().parse().map_err(|_| usage(format!("--min-disc: bad degree `{deg}`")))?;
                        let v: u64 = v.trim().parse().map_err(|_| usage(format!("--min-disc: bad value `{v}`")))?;
                        cfg.min_discriminants.insert(deg, v);
                    }
                    let fd = FamilyDatum::Hilbert { k: *k, n: *n, df: *df, norm_n: *norm_n };
                    let c = certify_hilbert(&fd, &rational_arg("s0", s0)?, &cfg)?;
                    ("certify hilbert", json!({"k": k, "n": n, "dF": df, "normN": norm_n, "s0": s0, "min_disc": min_disc}), c)
                }
                CertifyCmd::Siegel { g, k, s0 } => {
                    let c = certify_siegel(&FamilyDatum::Siegel { g: *g, k: *k }, &rational_arg("s0", s0)?, &cfg)?;
                    ("certify siegel", json!({"g": g, "k": k, "s0": s0}), c)
                }
            };
            let r = certificate_json(&cert, digits);
            out.emit(name, inputs, r, &cert.assumptions, cert.to_text());
            Ok(if cert.verdict == Verdict::Certified { 0 } else { 1 })
        }
        Command::Rank { family, j, s0, q } => {
            let cfg = CertConfig::new(prec);
            let cert = match (q, j.is_empty()) {
                (Some(q), true) => {
                    let fd = family.datum(None)?;
                    coprime_rank_certificate(&fd, *q, &cfg)?
                }
                (None, false) => {
                    let s0 = s0.as_deref().ok_or_else(|| usage("--J needs --s0"))?;
                    let set = IntegerSet::new(j.clone()).map_err(|e| usage(e.to_string()))?;
                    let fd = family.datum(Some(set.elems()[0]))?;
                    rank_certificate(&fd, &set, &rational_arg("s0", s0)?, &cfg)?
                }
                _ => return Err(usage("give exactly one of --J and --q")),
            };
            let inputs = json!({"family": family.family, "J": j, "q": q, "s0": s0, "k": family.k, "N": family.level, "D": family.disc});
            let r = certificate_json(&cert, digits);
            out.emit("rank", inputs, r, &cert.assumptions, cert.to_text());
            Ok(if cert.verdict == Verdict::Certified { 0 } else { 1 })
        }
        Command::GenData { series, d, nmax, out: path } => {
            let need_d = || d.ok_or_else(|| usage("--D is required for this series"));
            let cs = match series {
                SeriesKind::Delta => delta_series(*nmax)?,
                SeriesKind::Twist => delta_twisted(need_d()?, *nmax)?,
                SeriesKind::Character => real_character(need_d()?, *nmax)?,
                SeriesKind::Hilbert => delta_hilbert(*nmax)?,
            };
            let text = cs.to_text();
            match path {
                Some(p) => {
                    fs::write(p, &text).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
                    let inputs = json!({"series": format!("{series:?}").to_lowercase(), "D": d, "nmax": nmax});
                    let mut r = Map::new();
                    r.insert("value".into(), json!(p.display().to_string()));
                    out.emit("gen-data", inputs, r, &[], format!("wrote {} coefficients to {}", nmax, p.display()));
                }
                None => out.buf.push_str(&text),
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let mut out = Out { format: cli.format, bits: cli.precision, buf: String::new() };
    let code = match run(&cli, &mut out) {
        Ok(c) => c,
        Err(f) => {
            eprintln!("error: {}", f.message());
            f.code()
        }
    };
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.buf.as_bytes());
    let _ = stdout.flush();
    ExitCode::from(code)
}
