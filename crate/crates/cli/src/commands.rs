use std::path::PathBuf;

use pincode::builders::{write_chain_complex, ChainComplex};
use pincode::csscode::{
    build_pin_code, code_stats, distance, gauge_code, logical_basis, CssCode, DistanceMode, DistanceOptions,
    WeightStats,
};
use pincode::distill::{ccz_code, gamma, puncture_search, PunctureOptions};
use pincode::f2la::io::{read_matrix, write_matrix};
use pincode::f2la::MatrixFormat;
use pincode::relation::{write_relation, PinCodeRelation, TypeSet};
use pincode::shrunk::{lift_homology, overlap_counts, shrunk_complex};
use pincode::transversal::{correction_polynomial, extract_logical_polynomial, transversality_report, ConditionReport};
use pincode::BitMatrix;

use crate::report::{write_file, Report};
use crate::spec::{self, LoadedSpec};
use crate::{CliError, CodeArgs, Common};

struct Job {
    loaded: LoadedSpec,
    out: Option<PathBuf>,
    format: MatrixFormat,
}

impl Job {
    fn open(common: &Common) -> Result<Job, CliError> {
        let loaded = spec::load(&common.spec)?;
        let out = common
            .out
            .clone()
            .or_else(|| loaded.spec.output.dir.as_ref().map(|d| loaded.base.join(d)));
        let format = match common.format {
            Some(f) => f,
            None => loaded
                .spec
                .output
                .format
                .parse()
                .map_err(|_| CliError::Spec(format!("unknown output.format {:?}", loaded.spec.output.format)))?,
        };
        Ok(Job { loaded, out, format })
    }

    fn relation(&self) -> Result<(PinCodeRelation, Option<ChainComplex>), CliError> {
        spec::build_relation(&self.loaded)
    }

    fn hash(&self) -> &str {
        &self.loaded.hash
    }

    fn write(&self, name: &str, contents: &str) -> Result<(), CliError> {
        if let Some(dir) = &self.out {
            write_file(dir, name, contents)?;
        }
        Ok(())
    }

    fn pin_types(&self, args: &CodeArgs) -> Result<(usize, usize), CliError> {
        let c = &self.loaded.spec.code;
        let x = args.x.or(c.x).ok_or_else(|| CliError::Spec("code.x (or --x) is required".into()))?;
        let z = args.z.or(c.z).ok_or_else(|| CliError::Spec("code.z (or --z) is required".into()))?;
        Ok((x, z))
    }

    /// The CCZ code when the spec asks for one and no flags override it,
    /// otherwise the (x, z)-pin code.
    fn code(&self, rel: &PinCodeRelation, args: &CodeArgs) -> Result<(CssCode, String), CliError> {
        if let (Some(x), None, None) = (self.loaded.spec.code.ccz_x, args.x, args.z) {
            return Ok((ccz_code(rel, x)?, format!("ccz code x={x}")));
        }
        let (x, z) = self.pin_types(args)?;
        if x + z > rel.d() {
            return Err(CliError::Constraint(format!("x + z = {} exceeds D = {}", x + z, rel.d())));
        }
        if x == 0 {
            eprintln!("warning: x = 0 gives at most one X stabilizer, supported on all qubits");
        }
        if z == 0 {
            eprintln!("warning: z = 0 gives at most one Z stabilizer, supported on all qubits");
        }
        Ok((build_pin_code(rel, x, z)?, format!("({x},{z})-pin code")))
    }
}

fn weights_line(name: &str, w: &WeightStats) -> String {
    format!(
        "{name} generators={} rank={} weight min={} mean={:.3} max={} max-qubit-degree={}",
        w.generators, w.rank, w.min_weight, w.mean_weight, w.max_weight, w.max_qubit_degree
    )
}

fn condition_lines(report: &mut Report, name: &str, c: &ConditionReport) {
    report.line(format!("{name} {}", if c.passed { "pass" } else { "fail" }));
    for w in &c.witnesses {
        report.line(format!("  violation {w}"));
    }
}

pub fn build(common: &Common) -> Result<(), CliError> {
    let job = Job::open(common)?;
    let (rel, complex) = job.relation()?;
    let validation = rel.validate(false);
    let mut report = Report::new("build", job.hash(), &[]);
    report.line(format!("levels {:?}", rel.level_sizes()));
    report.line(format!("D {}", rel.d()));
    report.line(format!("flags {}", rel.num_flags()));
    report.line(format!("dropped-flags {}", rel.dropped_flag_count()));
    report.line(format!("free-pins {}", rel.has_free_pins()));
    report.line(format!(
        "validation {} checked={}",
        if validation.passed { "pass" } else { "fail" },
        validation.checked
    ));
    for (c, size) in &validation.witnesses {
        report.line(format!("  odd pinned set {c} size {size}"));
    }
    job.write("relation.txt", &write_relation(&rel))?;
    if let Some(cc) = &complex {
        job.write("complex.txt", &write_chain_complex(cc, job.format))?;
    }
    report.finish(job.out.as_deref())?;
    if validation.passed {
        Ok(())
    } else {
        Err(CliError::Constraint(format!(
            "{} D-pinned sets have odd size",
            validation.witnesses.len()
        )))
    }
}

pub fn analyze(
    common: &Common,
    args: &CodeArgs,
    mode: Option<String>,
    budget: Option<u64>,
    seed: Option<u64>,
) -> Result<(), CliError> {
    let job = Job::open(common)?;
    let spec = &job.loaded.spec.distance;
    let mode: DistanceMode = mode
        .as_deref()
        .unwrap_or(&spec.mode)
        .parse()
        .map_err(|e: pincode::Error| CliError::Spec(e.to_string()))?;
    let options = DistanceOptions {
        mode,
        budget: budget.unwrap_or(spec.budget),
        seed: seed.unwrap_or(spec.seed),
        ..DistanceOptions::default()
    };
    let (rel, _) = job.relation()?;
    let (code, label) = job.code(&rel, args)?;
    let seeds: Vec<(&str, u64)> = match mode {
        DistanceMode::Bound => vec![("distance", options.seed)],
        DistanceMode::Exact => Vec::new(),
    };
    let mut report = Report::new("analyze", job.hash(), &seeds);
    let stats = code_stats(&code);
    report.line(format!("code {label}"));
    if stats.k == 0 {
        report.line(format!("n={} k=0 d=undefined", stats.n));
        report.line(format!("parameters [[{},0]]", stats.n));
    } else {
        let d = distance(&code, &options)?;
        let shown = if d.exact {
            d.distance.to_string()
        } else {
            format!("≤{}", d.distance)
        };
        report.line(format!("n={} k={} d{}{shown}", stats.n, stats.k, if d.exact { "=" } else { "" }));
        report.line(format!("parameters [[{},{},{shown}]]", stats.n, stats.k));
        let species = |v: Option<usize>| v.map_or("-".to_string(), |v| v.to_string());
        report.line(format!(
            "distance mode={} x={} z={} witness={:?} weight={}",
            if d.exact { "exact" } else { "bound" },
            species(d.x_distance),
            species(d.z_distance),
            d.species,
            d.witness.weight()
        ));
        if let Ok(g) = gamma(stats.n, stats.k, d.distance) {
            report.line(format!("gamma {g:.4}"));
        }
    }
    report.line(weights_line("x-stabilizers", &stats.x));
    report.line(weights_line("z-stabilizers", &stats.z));
    report.finish(job.out.as_deref())
}

pub fn transversality(common: &Common, args: &CodeArgs, level: Option<usize>) -> Result<(), CliError> {
    let job = Job::open(common)?;
    let level = level.unwrap_or(job.loaded.spec.transversality.level);
    let (rel, _) = job.relation()?;
    let (code, label) = job.code(&rel, args)?;
    let basis = logical_basis(&code);
    let result = transversality_report(&code, &basis, level)?;
    let mut report = Report::new("transversality", job.hash(), &[]);
    report.line(format!("code {label}"));
    report.line(format!("n={} k={} level={level}", code.n(), basis.k()));
    condition_lines(&mut report, "exact", &result.exact);
    condition_lines(&mut report, "quasi", &result.quasi);
    match &result.exhaustive {
        Some(e) => report.line(format!(
            "exhaustive exact={} quasi={}",
            if e.exact { "pass" } else { "fail" },
            if e.quasi { "pass" } else { "fail" }
        )),
        None => report.line("exhaustive skipped"),
    }
    let poly = extract_logical_polynomial(&basis.lx, level)?;
    report.line(format!("logical polynomial {poly}"));
    if let Some(gates) = poly.gates() {
        let names: Vec<String> = gates.iter().map(ToString::to_string).collect();
        report.line(format!("gates {}", if names.is_empty() { "none".into() } else { names.join(" ") }));
    }
    if level >= 2 {
        match correction_polynomial(&basis.lx, code.sx(), level) {
            Ok(c) => report.line(format!("correction polynomial {c}")),
            Err(e) => report.line(format!("correction unavailable: {e}")),
        }
    }
    report.finish(job.out.as_deref())
}

pub fn gauge(common: &Common, args: &CodeArgs) -> Result<(), CliError> {
    let job = Job::open(common)?;
    let (rel, _) = job.relation()?;
    let (x, z) = job.pin_types(args)?;
    let g = gauge_code(&rel, x, z)?;
    let mut report = Report::new("gauge", job.hash(), &[]);
    report.line(format!("gauge ({x},{z}) n={}", g.gx.ncols()));
    report.line(format!("gauge-x generators={} rank={}", g.gx.nrows(), g.gx.rank()));
    report.line(format!("gauge-z generators={} rank={}", g.gz.nrows(), g.gz.rank()));
    report.line(format!("stabilizers-x rank={} stabilizers-z rank={}", g.sx.rank(), g.sz.rank()));
    report.line(format!("center-x rank={} center-z rank={}", g.center_x.rank(), g.center_z.rank()));
    report.line(format!("k={} stabilizer-code-k={} differs={}", g.k, g.stabilizer_code_k, g.k_differs()));
    report.finish(job.out.as_deref())
}

pub fn shrunk(common: &Common, args: &CodeArgs, type_ranks: Option<Vec<usize>>) -> Result<(), CliError> {
    let job = Job::open(common)?;
    let (rel, _) = job.relation()?;
    let (x, z) = job.pin_types(args)?;
    let ranks = type_ranks
        .or_else(|| job.loaded.spec.shrunk.type_ranks.clone())
        .unwrap_or_else(|| (0..x).collect());
    let t = TypeSet::from_ranks(ranks)?;
    let sc = shrunk_complex(&rel, x, z, t)?;
    let (sz, _) = rel.stabilizer_matrix(z);
    let reps = sc.homology_representatives();
    let mut report = Report::new("shrunk", job.hash(), &[]);
    report.line(format!("type {t} x={x} z={z}"));
    report.line(format!("dims {:?}", sc.complex.dims()));
    report.line(format!("boundaries-compose-to-zero {}", sc.complex.composes_to_zero()));
    report.line(format!("homology rank {}", reps.nrows()));
    for (i, cycle) in reps.rows().iter().enumerate() {
        let lifted = lift_homology(&sc, cycle)?;
        report.line(format!(
            "  representative {i} lifted weight={} commutes-with-z={}",
            lifted.weight(),
            sz.syndrome(&lifted).is_zero()
        ));
    }
    let counts = overlap_counts(&rel, &sc)?;
    let agree = counts.iter().filter(|c| c.pin_code_rank == c.shrunk_rank).count();
    report.line(format!("overlap counts agree on {agree} of {} level-0 sets", counts.len()));
    job.write("shrunk_provenance.txt", &sc.provenance())?;
    report.finish(job.out.as_deref())
}

pub fn puncture(
    common: &Common,
    target_k: Option<usize>,
    target_d: Option<usize>,
    budget: Option<u64>,
    seed: Option<u64>,
) -> Result<(), CliError> {
    let job = Job::open(common)?;
    let p = &job.loaded.spec.puncture;
    let g: BitMatrix = match (&p.matrix, p.pinned) {
        (Some(path), _) => {
            let full = job.loaded.base.join(path);
            let text = std::fs::read_to_string(&full).map_err(|e| CliError::Io(format!("{}: {e}", full.display())))?;
            read_matrix(&text, job.format)?
        }
        (None, Some(k)) => job.relation()?.0.stabilizer_matrix(k).0,
        (None, None) => return Err(CliError::Spec("puncture.pinned or puncture.matrix is required".into())),
    };
    let options = PunctureOptions::new(
        target_k.unwrap_or(p.target_k),
        target_d.unwrap_or(p.target_d),
        budget.unwrap_or(p.budget),
        seed.unwrap_or(p.seed),
    );
    let results = puncture_search(&g, &options)?;
    let mut report = Report::new("puncture", job.hash(), &[("puncture", options.seed)]);
    report.line(format!(
        "generators {}x{} rank={} target-k={} target-d={} budget={}",
        g.nrows(),
        g.ncols(),
        g.rank(),
        options.target_k,
        options.target_d,
        options.budget
    ));
    report.line(format!("candidates {}", results.len()));
    report.line("index n k d gamma stream punctured");
    for (i, r) in results.iter().enumerate() {
        let d = r.distance.as_ref().map_or("-".to_string(), |d| {
            if d.exact {
                d.distance.to_string()
            } else {
                format!("≤{}", d.distance)
            }
        });
        let gamma = r.gamma.map_or("-".to_string(), |g| format!("{g:.4}"));
        let stream = r.stream.map_or("-".to_string(), |s| s.to_string());
        let cols: Vec<String> = r.punctured_columns.iter().map(ToString::to_string).collect();
        report.line(format!("{i} {} {} {d} {gamma} {stream} {}", r.n, r.k, cols.join(",")));
        job.write(&format!("puncture_{i}_sx.txt"), &write_matrix(r.code.sx(), job.format))?;
        job.write(&format!("puncture_{i}_sz.txt"), &write_matrix(r.code.sz(), job.format))?;
        if let Some(lx) = r.code.imposed_lx() {
            job.write(&format!("puncture_{i}_lx.txt"), &write_matrix(lx, job.format))?;
        }
    }
    report.finish(job.out.as_deref())
}

pub fn export(common: &Common, args: &CodeArgs) -> Result<(), CliError> {
    let job = Job::open(common)?;
    let Some(dir) = job.out.clone() else {
        return Err(CliError::Spec("export needs --out or output.dir".into()));
    };
    let (rel, complex) = job.relation()?;
    let (code, label) = job.code(&rel, args)?;
    let basis = logical_basis(&code);
    let mut report = Report::new("export", job.hash(), &[]);
    report.line(format!("code {label} n={} k={} format={}", code.n(), basis.k(), job.format));
    let mut files = vec![
        ("sx.txt", write_matrix(code.sx(), job.format)),
        ("sz.txt", write_matrix(code.sz(), job.format)),
        ("lx.txt", write_matrix(&basis.lx, job.format)),
        ("lz.txt", write_matrix(&basis.lz, job.format)),
        ("relation.txt", write_relation(&rel)),
    ];
    if let Some(cc) = &complex {
        files.push(("complex.txt", write_chain_complex(cc, job.format)));
    }
    for (name, contents) in &files {
        write_file(&dir, name, contents)?;
        report.line(format!("wrote {name}"));
    }
    report.finish(Some(&dir))
}
