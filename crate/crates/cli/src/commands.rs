use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use discgeom::bounds::verify_bounds;
use discgeom::geometry::{
    dirichlet_solve, gaussian_weights, newton_weights, smooth, variable_weight_flow, Embedding, HookeSystem,
    SmoothingMethod,
};
use discgeom::identities::run_identity_checks;
use discgeom::learning::{
    bridge_weights, knn_neighbors, laplacian_eigenmaps, lle_embed, lle_weights, lpp, pca, spectral_clustering,
    ClusterMode,
};
use discgeom::random_walk::{commute_distance, commute_distance_spectral, commute_embedding, WalkOperator};
use discgeom::{eigendecompose, FilterKind, FilterSpec, GraphSpace, VertexFunction};

use crate::args::{
    ClusterModeArg, Command, CommuteMethod, EmbedMethod, FilterName, Format, Input, Law, MeasureMode, SmoothName,
    WeightMode,
};
use crate::io::{
    emit, fmt_f64, load_boundary, load_graph, load_measure, load_points, matrix_csv, nums, to_json, CliError,
    CliResult, Num, SCHEMA,
};

fn points(input: &Input) -> CliResult<Embedding> {
    let path = input
        .points
        .as_ref()
        .ok_or_else(|| CliError::config("this command needs --points"))?;
    load_points(path, input.header)
}

fn explicit_measure(input: &Input, n: usize) -> CliResult<Option<DVector<f64>>> {
    match input.measure {
        MeasureMode::Unit => Ok(Some(DVector::from_element(n, 1.0))),
        MeasureMode::File => {
            let path = input
                .measure_file
                .as_ref()
                .ok_or_else(|| CliError::config("--measure file needs --measure-file"))?;
            Ok(Some(load_measure(path, n)?))
        }
        MeasureMode::Degree => Ok(None),
    }
}

/// A measure that does not depend on the weights.
fn fixed_measure(input: &Input, n: usize, why: &str) -> CliResult<DVector<f64>> {
    explicit_measure(input, n)?.ok_or_else(|| CliError::config(format!("{why} needs --measure unit or file")))
}

fn weights(input: &Input, pts: Option<&Embedding>) -> CliResult<DMatrix<f64>> {
    let need_points = || pts.ok_or_else(|| CliError::config("this weight mode needs --points"));
    match input.weights {
        WeightMode::File => {
            let path = input
                .graph
                .as_ref()
                .ok_or_else(|| CliError::config("--weights file needs --graph"))?;
            load_graph(path)
        }
        WeightMode::Gaussian => Ok(gaussian_weights(need_points()?, input.scale, input.sigma)?),
        WeightMode::Bridge => {
            let p = need_points()?;
            Ok(bridge_weights(&fixed_measure(input, p.n(), "--weights bridge")?)?)
        }
        WeightMode::Newton => {
            let p = need_points()?;
            Ok(newton_weights(&fixed_measure(input, p.n(), "--weights newton")?, p, input.cg)?)
        }
    }
}

fn space_from(input: &Input, pts: Option<&Embedding>) -> CliResult<GraphSpace> {
    let w = weights(input, pts)?;
    let n = w.nrows();
    if let Some(p) = pts {
        if p.n() != n {
            return Err(CliError::config(format!(
                "points have {} rows but the graph has {n} vertices",
                p.n()
            )));
        }
    }
    Ok(match explicit_measure(input, n)? {
        Some(mu) => GraphSpace::new(mu, w)?,
        None => GraphSpace::with_degree_measure(w)?,
    })
}

/// The space, loading points only when the weight mode needs them.
fn space(input: &Input) -> CliResult<GraphSpace> {
    if input.weights == WeightMode::File {
        space_from(input, None)
    } else {
        let p = points(input)?;
        space_from(input, Some(&p))
    }
}

fn signal(input: &Input, path: &std::path::Path, n: usize) -> CliResult<DMatrix<f64>> {
    let s = load_points(path, input.header)?;
    if s.n() != n {
        return Err(CliError::config(format!("signal has {} rows, expected {n}", s.n())));
    }
    Ok(s.into_coords())
}

fn map_columns<F>(m: &DMatrix<f64>, mut f: F) -> CliResult<DMatrix<f64>>
where
    F: FnMut(VertexFunction) -> discgeom::Result<DVector<f64>>,
{
    let mut out = m.clone();
    for s in 0..m.ncols() {
        let col = f(VertexFunction::new(m.column(s).into_owned()))?;
        out.set_column(s, &col);
    }
    Ok(out)
}

#[derive(Serialize)]
struct SpectrumJson {
    schema: &'static str,
    eigenvalues: Vec<Num>,
    /// One array per eigenvalue, indexed by vertex.
    eigenfunctions: Vec<Vec<Num>>,
}

#[derive(Serialize)]
struct CheckJson {
    name: &'static str,
    lhs: Num,
    rhs: Num,
    slack: Num,
    pass: bool,
}

#[derive(Serialize)]
struct BoundsJson {
    schema: &'static str,
    rho2: Num,
    rho_n: Num,
    beta: Num,
    beta_witness: Vec<usize>,
    delta: Num,
    checks: Vec<CheckJson>,
    all_pass: bool,
}

#[derive(Serialize)]
struct ClusterJson {
    schema: &'static str,
    k: usize,
    seed: u64,
    objective: Num,
    labels: Vec<usize>,
}

#[derive(Serialize)]
struct IdentityJson {
    name: &'static str,
    error: Num,
    tolerance: Num,
    pass: bool,
}

#[derive(Serialize)]
struct ChecksJson {
    schema: &'static str,
    seed: u64,
    checks: Vec<IdentityJson>,
    all_pass: bool,
}

pub fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Spectrum { input, format } => {
            let spec = eigendecompose(&space(&input)?)?;
            let n = spec.len();
            let text = match format {
                Format::Csv => {
                    let mut out = String::from("index,eigenvalue");
                    for x in 0..n {
                        out.push_str(&format!(",v{x}"));
                    }
                    out.push('\n');
                    for i in 0..n {
                        out.push_str(&format!("{i},{}", fmt_f64(spec.eigenvalue(i))));
                        for x in 0..n {
                            out.push(',');
                            out.push_str(&fmt_f64(spec.eigenfunctions()[(x, i)]));
                        }
                        out.push('\n');
                    }
                    out
                }
                Format::Json => to_json(&SpectrumJson {
                    schema: SCHEMA,
                    eigenvalues: nums(spec.eigenvalues().iter().copied()),
                    eigenfunctions: (0..n)
                        .map(|i| nums(spec.eigenfunctions().column(i).iter().copied()))
                        .collect(),
                })?,
            };
            emit(input.output.as_deref(), &text)
        }
        Command::Fourier {
            input,
            signal: path,
            inverse,
        } => {
            let spec = eigendecompose(&space(&input)?)?;
            let s = signal(&input, &path, spec.len())?;
            let out = if inverse {
                map_columns(&s, |f| spec.inverse_fourier(&f.into_inner()).map(|v| v.into_inner()))?
            } else {
                map_columns(&s, |f| spec.fourier(&f))?
            };
            emit(input.output.as_deref(), &matrix_csv(&out))
        }
        Command::Filter {
            input,
            signal: path,
            kind,
            t,
            c,
            eps,
            eps2,
            order,
        } => {
            let g = space(&input)?;
            let c = if c > 0.0 { c } else { WalkOperator::new(&g, 0.0)?.c() };
            let kind = match kind {
                FilterName::Heat => FilterKind::Heat { t, c },
                FilterName::Explicit => FilterKind::Explicit { eps },
                FilterName::Taubin => FilterKind::Taubin { eps, eps2 },
                FilterName::Implicit => FilterKind::Implicit { eps },
                FilterName::Biimplicit => FilterKind::BiImplicit { eps },
            };
            let fs = FilterSpec::new(kind, order)?;
            let spec = eigendecompose(&g)?;
            let s = signal(&input, &path, g.n())?;
            let out = map_columns(&s, |f| spec.apply_filter(&fs, &f).map(|v| v.into_inner()))?;
            emit(input.output.as_deref(), &matrix_csv(&out))
        }
        Command::Heat {
            input,
            signal: path,
            t,
            c,
            steps,
        } => {
            let g = space(&input)?;
            let walk = WalkOperator::new(&g, c)?;
            let s = signal(&input, &path, g.n())?;
            let out = match steps {
                Some(k) => map_columns(&s, |f| walk.evolve_discrete(&f, k).map(|v| v.into_inner()))?,
                None => map_columns(&s, |f| walk.evolve_continuous(&f, t).map(|v| v.into_inner()))?,
            };
            emit(input.output.as_deref(), &matrix_csv(&out))
        }
        Command::Commute { input, c, method } => {
            let g = space(&input)?;
            let d = match method {
                CommuteMethod::Hitting => commute_distance(&g, c)?,
                CommuteMethod::Spectral => commute_distance_spectral(&eigendecompose(&g)?)?,
            };
            emit(input.output.as_deref(), &matrix_csv(&d))
        }
        Command::Hitting {
            input,
            target,
            c,
            walks,
            seed,
        } => {
            let g = space(&input)?;
            let walk = WalkOperator::new(&g, c)?;
            let m = walk.expected_hitting(target)?;
            let mut out = String::from("x,expected");
            if walks > 0 {
                out.push_str(",mc_mean,mc_std_error");
            }
            out.push('\n');
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for x in 0..g.n() {
                out.push_str(&format!("{x},{}", fmt_f64(m[x])));
                if walks > 0 {
                    let est = walk.simulate_hitting(x, target, walks, &mut rng)?;
                    out.push_str(&format!(",{},{}", fmt_f64(est.mean), fmt_f64(est.std_error)));
                }
                out.push('\n');
            }
            emit(input.output.as_deref(), &out)
        }
        Command::Bounds { input } => {
            let r = verify_bounds(&space(&input)?)?;
            let json = BoundsJson {
                schema: SCHEMA,
                rho2: Num(r.rho2),
                rho_n: Num(r.rho_n),
                beta: Num(r.beta),
                beta_witness: r.beta_witness.clone(),
                delta: Num(r.delta),
                all_pass: r.all_pass(),
                checks: r
                    .checks
                    .iter()
                    .map(|c| CheckJson {
                        name: c.name,
                        lhs: Num(c.lhs),
                        rhs: Num(c.rhs),
                        slack: Num(c.slack),
                        pass: c.pass,
                    })
                    .collect(),
            };
            emit(input.output.as_deref(), &to_json(&json)?)
        }
        Command::Embed {
            input,
            method,
            dims,
            neighbors,
            reg,
        } => {
            let e = match method {
                EmbedMethod::Eigenmaps => laplacian_eigenmaps(&eigendecompose(&space(&input)?)?, dims)?,
                EmbedMethod::Commute => commute_embedding(&eigendecompose(&space(&input)?)?, dims)?,
                EmbedMethod::Pca => {
                    let p = points(&input)?;
                    let mu = match explicit_measure(&input, p.n())? {
                        Some(mu) => mu,
                        None => space_from(&input, Some(&p))?.measure().clone(),
                    };
                    pca(&mu, p.coords(), dims)?.scores
                }
                EmbedMethod::Lpp => {
                    let p = points(&input)?;
                    let g = space_from(&input, Some(&p))?;
                    lpp(&g, p.coords(), dims)?.embedding
                }
                EmbedMethod::Lle => {
                    let p = points(&input)?;
                    let w = lle_weights(&p, &knn_neighbors(&p, neighbors)?, reg)?;
                    lle_embed(&w, dims)?
                }
            };
            emit(input.output.as_deref(), &matrix_csv(e.coords()))
        }
        Command::Cluster {
            input,
            k,
            seed,
            mode,
            c,
            restarts,
            format,
        } => {
            let spec = eigendecompose(&space(&input)?)?;
            let mode = match mode {
                ClusterModeArg::Eigenmaps => ClusterMode::Eigenmaps,
                ClusterModeArg::Kernel => ClusterMode::Kernel { c },
            };
            let r = spectral_clustering(&spec, k, mode, seed, restarts)?;
            let text = match format {
                Format::Csv => {
                    let mut out = String::from("vertex,label\n");
                    for (x, l) in r.partition.labels().iter().enumerate() {
                        out.push_str(&format!("{x},{l}\n"));
                    }
                    out
                }
                Format::Json => to_json(&ClusterJson {
                    schema: SCHEMA,
                    k,
                    seed,
                    objective: Num(r.objective),
                    labels: r.partition.labels().to_vec(),
                })?,
            };
            emit(input.output.as_deref(), &text)
        }
        Command::Smooth {
            input,
            method,
            eps,
            eps2,
            iters,
        } => {
            let p = points(&input)?;
            let g = space_from(&input, Some(&p))?;
            let method = match method {
                SmoothName::Explicit => SmoothingMethod::Explicit { eps },
                SmoothName::Taubin => SmoothingMethod::Taubin { eps, eps2 },
                SmoothName::Implicit => SmoothingMethod::Implicit { eps },
                SmoothName::Biimplicit => SmoothingMethod::BiImplicit { eps },
            };
            let out = smooth(&g, &p, method, iters)?;
            emit(input.output.as_deref(), &matrix_csv(out.coords()))
        }
        Command::Dirichlet { input, boundary } => {
            let g = space(&input)?;
            let (idx, values) = load_boundary(&boundary)?;
            let out = dirichlet_solve(&g, &idx, &values)?;
            emit(input.output.as_deref(), &matrix_csv(out.coords()))
        }
        Command::Simulate {
            input,
            law,
            dt,
            eps,
            steps,
            every,
            velocities,
        } => {
            if every == 0 {
                return Err(CliError::config("--every must be >= 1"));
            }
            let p = points(&input)?;
            let d = p.dim();
            let mut out = String::from("step,vertex");
            for s in 0..d {
                out.push_str(&format!(",x{s}"));
            }
            out.push('\n');
            let record = |out: &mut String, step: usize, r: &DMatrix<f64>| {
                for (i, row) in r.row_iter().enumerate() {
                    out.push_str(&format!("{step},{i}"));
                    for &v in row.iter() {
                        out.push(',');
                        out.push_str(&fmt_f64(v));
                    }
                    out.push('\n');
                }
            };
            match law {
                Law::Hooke => {
                    let g = space_from(&input, Some(&p))?;
                    let sys = HookeSystem::new(g.measure().clone(), g.weights().clone())?;
                    let dt = match dt {
                        Some(dt) => dt,
                        None => sys.max_step()?,
                    };
                    let v0 = match &velocities {
                        Some(path) => {
                            let v = load_points(path, input.header)?.into_coords();
                            if v.shape() != p.coords().shape() {
                                return Err(CliError::config("velocities must match the points' shape"));
                            }
                            v
                        }
                        None => DMatrix::zeros(p.n(), d),
                    };
                    sys.leapfrog(&p, &v0, dt, steps, |step, r, _| {
                        if step % every == 0 {
                            record(&mut out, step, r);
                        }
                    })?;
                }
                Law::Newton => {
                    let masses = fixed_measure(&input, p.n(), "--law newton")?;
                    let mut cur = p.clone();
                    record(&mut out, 0, cur.coords());
                    let mut done = 0;
                    while done < steps {
                        let chunk = every.min(steps - done);
                        let flow = variable_weight_flow(&masses, &cur, input.cg, eps, chunk)?;
                        done += flow.completed;
                        cur = flow.embedding;
                        if let Some((i, j)) = flow.collision {
                            eprintln!("W:COLLISION:points {i} and {j} met after step {done}; trajectory truncated");
                            record(&mut out, done, cur.coords());
                            break;
                        }
                        record(&mut out, done, cur.coords());
                    }
                }
            }
            emit(input.output.as_deref(), &out)
        }
        Command::Checks { input, seed } => {
            let checks = run_identity_checks(&space(&input)?, seed)?;
            let all_pass = checks.iter().all(|c| c.pass);
            let json = ChecksJson {
                schema: SCHEMA,
                seed,
                all_pass,
                checks: checks
                    .iter()
                    .map(|c| IdentityJson {
                        name: c.name,
                        error: Num(c.error),
                        tolerance: Num(c.tolerance),
                        pass: c.pass,
                    })
                    .collect(),
            };
            emit(input.output.as_deref(), &to_json(&json)?)?;
            if all_pass {
                Ok(())
            } else {
                let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name).collect();
                Err(CliError::numerical("CHECK_FAILED", failed.join("; ")))
            }
        }
    }
}
