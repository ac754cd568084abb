//! The sweep commands. Every sweep point is computed on the worker pool and
//! rows are emitted in input order.

use rayon::prelude::*;

use salpeter::bounds::{
    bound_below_energy, bound_daubechies, bound_lwave_holder, bound_lwave_trace,
    bound_total_central_ur, bound_total_holder, bound_total_trace, const_b, const_c_ell,
    const_c_nu_q, critical_daubechies, critical_trace_lwave, existence_critical_max,
    existence_critical_p, l_plus, BoundReport, TraceSettings,
};
use salpeter::numerics::airy_negative_zeros;
use salpeter::potentials::{RadialPotential, Tabulated};
use salpeter::solver::{count_states_below, critical_coupling_exact, l_exact};

use crate::args::*;
use crate::error::{CliError, Result};
use crate::output::{plain, real, Cell, Record};

/// Comma list of numbers; `a..b` expands to `a, a+1, ..., b`.
pub fn parse_f64_list(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some((a, b)) = item.split_once("..") {
            let (a, b) = (parse_f64(a)?, parse_f64(b)?);
            if !(a.is_finite() && b.is_finite()) {
                return Err(CliError::Config(format!("range {item} must be finite")));
            }
            let mut x = a;
            while x <= b + 1e-9 {
                out.push(x);
                x += 1.0;
            }
        } else {
            out.push(parse_f64(item)?);
        }
    }
    Ok(out)
}

pub fn parse_f64(text: &str) -> Result<f64> {
    text.trim()
        .parse()
        .map_err(|_| CliError::Config(format!("'{text}' is not a number")))
}

pub fn parse_u32_list(text: &str) -> Result<Vec<u32>> {
    parse_f64_list(text)?
        .into_iter()
        .map(|x| {
            if x >= 0.0 && x.fract() == 0.0 && x <= f64::from(u32::MAX) {
                Ok(x as u32)
            } else {
                Err(CliError::Config(format!("{x} is not a non-negative integer")))
            }
        })
        .collect()
}

fn nonempty<T>(what: &str, items: Vec<T>) -> Result<Vec<T>> {
    if items.is_empty() {
        Err(CliError::Config(format!("{what} list is empty")))
    } else {
        Ok(items)
    }
}

/// A potential family with its strength left free.
pub struct Family {
    kind: PotentialKind,
    r1: f64,
    r2: f64,
    table: Option<Tabulated>,
    pub alpha: u8,
    pub strengths: Vec<f64>,
}

impl Family {
    pub fn new(args: &PotentialArgs) -> Result<Self> {
        let table = match (args.potential, &args.file) {
            (PotentialKind::Tab, Some(path)) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::Config(format!("cannot read {}: {e}", path.display()))
                })?;
                Some(Tabulated::parse(&text)?)
            }
            (PotentialKind::Tab, None) => {
                return Err(CliError::Config("--potential tab needs --file".into()))
            }
            _ => None,
        };
        let default_alpha = if args.potential == PotentialKind::Osc { 1 } else { 2 };
        let alpha = args.alpha.unwrap_or(default_alpha);
        if alpha != 1 && alpha != 2 {
            return Err(CliError::Config(format!("alpha must be 1 or 2, got {alpha}")));
        }
        Ok(Self {
            kind: args.potential,
            r1: args.r1,
            r2: args.r2,
            table,
            alpha,
            strengths: nonempty("strength", parse_f64_list(&args.g)?)?,
        })
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            PotentialKind::Exp => "exp",
            PotentialKind::Pt => "pt",
            PotentialKind::Sqw => "sqw",
            PotentialKind::Osc => "osc",
            PotentialKind::Tab => "tab",
        }
    }

    pub fn at(&self, g: f64) -> Result<RadialPotential> {
        Ok(match self.kind {
            PotentialKind::Exp => RadialPotential::exponential(g, 1.0)?,
            PotentialKind::Pt => RadialPotential::poschl_teller(g, 1.0)?,
            PotentialKind::Sqw => RadialPotential::square_well(g, self.r1, self.r2)?,
            PotentialKind::Osc => RadialPotential::harmonic_oscillator(g)?,
            PotentialKind::Tab => {
                RadialPotential::tabulated(self.table.clone().expect("table loaded")).scaled(g)?
            }
        })
    }

    fn is_confining(&self) -> bool {
        self.kind == PotentialKind::Osc
    }
}

fn require_massless(what: &str, betas: &[f64]) -> Result<()> {
    if betas.iter().any(|&b| b != 0.0) {
        return Err(CliError::Config(format!("{what} is derived for m = 0 only; use --beta 0")));
    }
    Ok(())
}

fn check_betas(betas: &[f64]) -> Result<()> {
    match betas.iter().find(|b| !(**b >= 0.0 && b.is_finite())) {
        Some(b) => Err(CliError::Config(format!("beta must be finite and >= 0, got {b}"))),
        None => Ok(()),
    }
}

/// Runs `f` over `points` in parallel, keeping input order and the first error.
fn sweep<P: Sync, F>(points: &[P], f: F) -> Result<Vec<Vec<Cell>>>
where
    F: Fn(&P) -> Result<Vec<Cell>> + Sync + Send,
{
    points.par_iter().map(f).collect()
}

pub fn constants(args: &ConstantsArgs) -> Result<Record> {
    match args.which {
        ConstantKind::CEll => {
            let ells = match (&args.l, args.lmax) {
                (Some(list), _) => parse_u32_list(list)?,
                (None, lmax) => (1..=lmax.unwrap_or(20)).collect(),
            };
            let mut record = Record::new("constants", vec![plain("l"), real("c_ell")]);
            for row in sweep(&ells, |&l| Ok(vec![l.into(), const_c_ell(l)?.into()]))? {
                record.push(row);
            }
            Ok(record)
        }
        ConstantKind::CNuQ => {
            let nus = parse_u32_list(&args.nu)?;
            let mut record = Record::new(
                "constants",
                vec![plain("nu"), real("q"), plain("alpha"), real("c_nu_q")],
            );
            let rows = sweep(&nus, |&nu| {
                Ok(vec![
                    nu.into(),
                    args.q.into(),
                    u32::from(args.alpha).into(),
                    const_c_nu_q(nu, args.q, args.alpha)?.into(),
                ])
            })?;
            for row in rows {
                record.push(row);
            }
            Ok(record)
        }
        ConstantKind::BNpp => {
            let pp = parse_f64(&args.pp)?;
            let sum = const_b(args.n, args.p, pp, args.alpha, args.tol)?;
            let mut record = Record::new(
                "constants",
                vec![
                    plain("n"),
                    real("p"),
                    real("pp"),
                    plain("alpha"),
                    real("b"),
                    real("tail"),
                    real("tail_error"),
                    plain("truncation_index"),
                ],
            );
            record.push(vec![
                args.n.into(),
                args.p.into(),
                Cell::Num(pp),
                u32::from(args.alpha).into(),
                sum.value.into(),
                sum.tail.into(),
                sum.tail_error.into(),
                sum.truncation_index.into(),
            ]);
            Ok(record)
        }
    }
}

pub fn critical(args: &CriticalArgs, seed: u64) -> Result<Record> {
    let family = Family::new(&args.potential)?;
    if family.is_confining() {
        return Err(CliError::Config(
            "critical strengths need a potential that vanishes at infinity".into(),
        ));
    }
    let ells = nonempty("l", parse_u32_list(&args.l)?)?;
    let betas = nonempty("beta", parse_f64_list(&args.beta)?)?;
    check_betas(&betas)?;
    let method = args.method;
    if matches!(method, CriticalMethod::ExistenceP | CriticalMethod::ExistenceMax) {
        require_massless("the existence condition", &betas)?;
    }
    if method == CriticalMethod::ExistenceMax && ells.contains(&0) {
        return Err(CliError::Config(
            "existence-max needs l >= 1: C(0, 1) diverges for the S wave".into(),
        ));
    }
    let per_wave = method != CriticalMethod::Daubechies;
    let points: Vec<(Option<u32>, f64)> = if per_wave {
        ells.iter()
            .flat_map(|&l| betas.iter().map(move |&b| (Some(l), b)))
            .collect()
    } else {
        betas.iter().map(|&b| (None, b)).collect()
    };
    let shape = family.at(1.0)?;
    let alpha = family.alpha;
    let settings = TraceSettings {
        seed,
        rel_tol: args.rel_tol.unwrap_or(1e-8),
        ..TraceSettings::default()
    };
    let exact_tol = args.rel_tol.unwrap_or(1e-3);
    let mut record = Record::new(
        "critical",
        vec![
            plain("potential"),
            plain("method"),
            plain("l"),
            real("beta"),
            plain("alpha"),
            real("g_c"),
            real("p_star"),
            real("bracket_lo"),
            real("bracket_hi"),
        ],
    );
    let rows = sweep(&points, |&(l, beta)| {
        let ell = l.unwrap_or(0);
        let (g, p_star, bracket) = match method {
            CriticalMethod::Trace => {
                (critical_trace_lwave(&shape, ell, beta, alpha, &settings)?, None, None)
            }
            CriticalMethod::ExistenceP => {
                let r = existence_critical_p(&shape, ell, alpha)?;
                (r.g_crit, r.p_star, None)
            }
            CriticalMethod::ExistenceMax => {
                (existence_critical_max(&shape, ell, alpha)?.g_crit, None, None)
            }
            CriticalMethod::Daubechies => (critical_daubechies(&shape, beta, alpha)?, None, None),
            CriticalMethod::Exact => {
                let r = critical_coupling_exact(&shape, ell, beta, alpha, exact_tol)?;
                (r.g_c_exact, None, Some(r.bracket))
            }
        };
        Ok(vec![
            family.name().into(),
            method_name(method).into(),
            l.into(),
            beta.into(),
            u32::from(alpha).into(),
            g.into(),
            p_star.into(),
            bracket.map(|b| b.0).into(),
            bracket.map(|b| b.1).into(),
        ])
    })?;
    for row in rows {
        record.push(row);
    }
    Ok(record)
}

fn method_name(method: CriticalMethod) -> &'static str {
    match method {
        CriticalMethod::Trace => "trace",
        CriticalMethod::ExistenceP => "existence-p",
        CriticalMethod::ExistenceMax => "existence-max",
        CriticalMethod::Daubechies => "daubechies",
        CriticalMethod::Exact => "exact",
    }
}

fn report_columns(mut leading: Vec<crate::output::Column>) -> Vec<crate::output::Column> {
    leading.extend([
        real("raw_bound"),
        plain("implied_count"),
        real("err_estimate"),
        plain("n"),
        real("p"),
        real("pp"),
        plain("nu_max"),
        plain("truncation_index"),
        plain("l_plus"),
        real("asymptotic"),
        plain("samples"),
        plain("warning"),
    ]);
    leading
}

fn report_cells(r: &BoundReport) -> Vec<Cell> {
    vec![
        r.raw_bound.into(),
        r.implied_count.into(),
        r.err_estimate.into(),
        r.params.n.into(),
        r.params.p.into(),
        r.params.pp.into(),
        r.params.nu_max.into(),
        r.params.truncation_index.into(),
        r.params.l_plus.into(),
        r.params.asymptotic.into(),
        r.params.samples.into(),
        r.warning.clone().into(),
    ]
}

pub fn bound(args: &BoundArgs, seed: u64) -> Result<Record> {
    use BoundMethodArg as M;
    let family = Family::new(&args.potential)?;
    let ells = nonempty("l", parse_u32_list(&args.l)?)?;
    let betas = nonempty("beta", parse_f64_list(&args.beta)?)?;
    check_betas(&betas)?;
    let method = args.method;
    if matches!(method, M::HolderLwave | M::HolderTotal | M::CentralUr) {
        require_massless("this bound", &betas)?;
    }
    let pp = parse_f64(&args.pp)?;
    let n = args.n.unwrap_or(match method {
        M::TraceLwave | M::HolderLwave => 2,
        M::TraceTotal => 4,
        _ => 5,
    });
    let per_wave = matches!(method, M::TraceLwave | M::HolderLwave);
    let mut points = Vec::new();
    for &g in &family.strengths {
        for &beta in &betas {
            if per_wave {
                points.extend(ells.iter().map(|&l| (g, Some(l), beta)));
            } else {
                points.push((g, None, beta));
            }
        }
    }
    let settings = TraceSettings {
        samples: args.samples,
        seed,
        rel_tol: args.rel_tol,
    };
    let alpha = family.alpha;
    let mut record = Record::new(
        "bound",
        report_columns(vec![
            plain("potential"),
            real("g"),
            plain("method"),
            plain("l"),
            real("beta"),
            plain("alpha"),
        ]),
    );
    let rows = sweep(&points, |&(g, l, beta)| {
        let v = family.at(g)?;
        let ell = l.unwrap_or(0);
        let report = match method {
            M::TraceLwave => bound_lwave_trace(&v, ell, beta, alpha, n, &settings)?,
            M::TraceTotal => bound_total_trace(&v, beta, alpha, n, args.nu_max, &settings)?,
            M::HolderLwave => bound_lwave_holder(&v, ell, n, args.p, pp, alpha)?,
            M::HolderTotal => bound_total_holder(&v, n, args.p, pp, alpha)?,
            M::CentralUr => bound_total_central_ur(&v, alpha)?,
            M::Daubechies => bound_daubechies(&v, beta, alpha)?,
        };
        let mut row = vec![
            family.name().into(),
            g.into(),
            report.method.as_str().into(),
            l.into(),
            beta.into(),
            u32::from(alpha).into(),
        ];
        row.extend(report_cells(&report));
        Ok(row)
    })?;
    for row in rows {
        record.push(row);
    }
    Ok(record)
}

pub fn lmax(args: &LmaxArgs) -> Result<Record> {
    let family = Family::new(&args.potential)?;
    if family.is_confining() {
        return Err(CliError::Config("a confining potential binds every wave".into()));
    }
    check_betas(&[args.beta])?;
    if args.method == LmaxMethod::Bound {
        require_massless("the angular-momentum cap", &[args.beta])?;
    }
    let alpha = family.alpha;
    let mut record = Record::new(
        "lmax",
        vec![
            plain("potential"),
            real("g"),
            plain("method"),
            real("beta"),
            plain("alpha"),
            plain("l"),
            plain("l_plus_plus"),
            plain("l_plus_plus_iterated"),
            real("s_value"),
        ],
    );
    let shape = family.at(1.0)?;
    let rows = sweep(&family.strengths, |&g| {
        let lead: Vec<Cell> = vec![
            family.name().into(),
            g.into(),
            match args.method {
                LmaxMethod::Bound => "bound",
                LmaxMethod::Exact => "exact",
            }
            .into(),
            args.beta.into(),
            u32::from(alpha).into(),
        ];
        let tail: Vec<Cell> = match args.method {
            LmaxMethod::Bound => {
                let limit = l_plus(&family.at(g)?, alpha)?;
                vec![
                    limit.l_plus.into(),
                    limit.l_plus_plus.into(),
                    limit.l_plus_plus_iterated.into(),
                    limit.s_value.into(),
                ]
            }
            LmaxMethod::Exact => vec![
                l_exact(&shape, g, args.beta, alpha)?.into(),
                Cell::Null,
                Cell::Null,
                Cell::Null,
            ],
        };
        Ok(lead.into_iter().chain(tail).collect())
    })?;
    for row in rows {
        record.push(row);
    }
    Ok(record)
}

/// `auto-airy:N` gives the first N levels `alpha^(2/3) k lambda_n` of the
/// massless S-wave oscillator.
fn kappa2_values(text: &str, family: &Family, g: f64) -> Result<Vec<f64>> {
    if let Some(count) = text.trim().strip_prefix("auto-airy:") {
        if !family.is_confining() {
            return Err(CliError::Config("auto-airy levels need --potential osc".into()));
        }
        let count: usize = count
            .parse()
            .map_err(|_| CliError::Config(format!("'{count}' is not a level count")))?;
        let scale = f64::from(family.alpha).powf(2.0 / 3.0) * g;
        return Ok(airy_negative_zeros(count)
            .map_err(|e| CliError::Numerical(e.to_string()))?
            .into_iter()
            .map(|z| scale * z)
            .collect());
    }
    parse_f64_list(text)
}

pub fn below_energy(args: &BelowEnergyArgs, seed: u64) -> Result<Record> {
    let family = Family::new(&args.potential)?;
    let ells = nonempty("l", parse_u32_list(&args.l)?)?;
    let betas = nonempty("beta", parse_f64_list(&args.beta)?)?;
    check_betas(&betas)?;
    let mut points = Vec::new();
    for &g in &family.strengths {
        let kappa2 = kappa2_values(&args.kappa2, &family, g)?;
        for &l in &ells {
            for &beta in &betas {
                points.extend(kappa2.iter().map(|&k2| (g, l, beta, k2)));
            }
        }
    }
    let settings = TraceSettings {
        seed,
        rel_tol: args.rel_tol,
        ..TraceSettings::default()
    };
    let alpha = family.alpha;
    let mut columns = vec![
        plain("potential"),
        real("g"),
        plain("l"),
        real("beta"),
        plain("alpha"),
        real("kappa2"),
        real("raw_bound"),
        plain("implied_count"),
        real("err_estimate"),
    ];
    if args.exact {
        columns.push(plain("exact_count"));
    }
    let mut record = Record::new("below-energy", columns);
    let rows = sweep(&points, |&(g, l, beta, k2)| {
        let v = family.at(g)?;
        let report = bound_below_energy(&v, l, beta, alpha, k2, &settings)?;
        let mut row: Vec<Cell> = vec![
            family.name().into(),
            g.into(),
            l.into(),
            beta.into(),
            u32::from(alpha).into(),
            k2.into(),
            report.raw_bound.into(),
            report.implied_count.into(),
            report.err_estimate.into(),
        ];
        if args.exact {
            let energy = if family.is_confining() { k2 } else { -k2 };
            row.push(count_states_below(&v, l, beta, alpha, energy)?.into());
        }
        Ok(row)
    })?;
    for row in rows {
        record.push(row);
    }
    Ok(record)
}
