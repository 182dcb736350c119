//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

use std::path::{Path, PathBuf};
use std::time::Instant;

use gsp_cli::commands::cmd_run;
use gsp_cli::config::RunConfig;
use gsp_core::filters::{cyclic_convolve, cyclic_convolve_dft, filter_matrix, graph_wavelet, FilterSpec};
use gsp_core::graph::{cyclic_shift, laplacian, normalized_adjacency};
use gsp_core::pipeline::{welch_psd, BaselineKind, ExperimentResult, WelchConfig};
use gsp_core::rng::{self, DrawKind};
use gsp_core::simulator::{condition_profiles, simulate_sample, structural_graph, Difficulty, ProfileFamily, SimConfig};
use gsp_core::spectral::{
    adjacency_laplacian_alignment, covariance_matrix, eigendecompose_symmetric, gft_basis, pca_components, GftKind,
};
use gsp_core::variation::{correlation_objective_gradient, learn_correlation_graph, pearson_matrix, tv_edge, tv_node, tv_spectral};
use gsp_core::{Graph, GraphMatrixKind, Signal};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

const IDENTITY_TOL: f64 = 1e-9;
const WAVELET_TOL: f64 = 1e-12;
const OPTIMIZER_TOL: f64 = 1e-6;
const GRADIENT_TOL: f64 = 1e-9;
const PCA_TOL: f64 = 1e-9;
const SPREAD_RATIO: f64 = 3.0;
const PEAK_BINS: i64 = 2;
const DIFFICULTY_GAP: f64 = 0.03;
const FREQUENCY_GAP: f64 = 0.03;
const KIND_MAD: f64 = 0.05;
const SEED: u64 = 0xacce;

struct Outcome {
    id: &'static str,
    passed: bool,
    detail: String,
}

fn outcome(id: &'static str, passed: bool, detail: String) -> Outcome {
    println!("{} {id}: {detail}", if passed { "PASS" } else { "FAIL" });
    Outcome { id, passed, detail }
}

fn random_graph(trial: u64) -> Graph {
    let mut r = rng::stream(SEED, trial, 0, DrawKind::Auxiliary);
    let n = 2 + (rng::uniform(&mut r, 0.0, 11.0) as usize).min(10);
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..i {
            let v = rng::uniform(&mut r, 0.0, 1.0);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    Graph::new(a).unwrap()
}

fn random_vector(n: usize, trial: u64, channel: u32) -> DVector<f64> {
    DVector::from_vec(rng::normals(&mut rng::stream(SEED, trial, channel, DrawKind::Innovation), n))
}

fn random_signal(rows: usize, cols: usize, trial: u64) -> Signal {
    let data: Vec<Vec<f64>> =
        (0..rows).map(|c| rng::normals(&mut rng::stream(SEED, trial, c as u32, DrawKind::Coloured), cols)).collect();
    Signal::from_rows(&data).unwrap()
}

fn edge_tv_oracle(a: &DMatrix<f64>, x: &DVector<f64>) -> f64 {
    let n = x.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            s += a[(i, j)] * (x[i] - x[j]).powi(2);
        }
    }
    0.5 * s
}

fn poly_apply(m: &DMatrix<f64>, p: &[f64], x: &DVector<f64>) -> DVector<f64> {
    let mut out = DVector::zeros(x.len());
    let mut power = x.clone();
    for &c in p {
        out += &power * c;
        power = m * power;
    }
    out
}

fn criterion_1() -> Outcome {
    let started = Instant::now();
    let mut worst = [0.0f64; 7];

    // DFT diagonalization of the cyclic shift with a hand-built unitary DFT.
    for n in [2usize, 3, 8, 13, 32] {
        let ac = cyclic_shift::<f64>(n).unwrap();
        let f = DMatrix::from_fn(n, n, |k, m| {
            Complex::from_polar(1.0 / (n as f64).sqrt(), -2.0 * std::f64::consts::PI * (k * m) as f64 / n as f64)
        });
        let d = &f * ac.weights().map(|v| Complex::new(v, 0.0)) * f.adjoint();
        for i in 0..n {
            for j in 0..n {
                let expected = if i == j {
                    Complex::from_polar(1.0, -2.0 * std::f64::consts::PI * i as f64 / n as f64)
                } else {
                    Complex::new(0.0, 0.0)
                };
                worst[0] = worst[0].max((d[(i, j)] - expected).norm());
            }
        }
        let lc = laplacian(&ac);
        let exact = DMatrix::identity(n, n) - ac.weights();
        if lc != exact {
            worst[1] = f64::INFINITY;
        }
    }

    for t in 0..100 {
        let g = random_graph(t);
        let n = g.n();
        let x = random_vector(n, t, 0);
        let l = laplacian(&g);
        let quad = x.dot(&(&l * &x));
        let oracle = edge_tv_oracle(g.weights(), &x);
        let lap = gft_basis(&g, GftKind::LaplacianBased, GraphMatrixKind::Laplacian).unwrap();
        let xt = lap.gft_matrix() * &x;
        let spectral: f64 = (0..n).map(|k| lap.eigenvalues()[k] * xt[k] * xt[k]).sum();
        for v in [tv_edge(&g, &x).unwrap(), quad, spectral, tv_spectral(&lap, &x).unwrap()] {
            worst[2] = worst[2].max((v - oracle).abs());
        }

        let an = normalized_adjacency(&g).unwrap();
        let e = eigendecompose_symmetric(&an).unwrap();
        let lmax = e.values.amax();
        for k in 0..n {
            let v = e.vectors.column(k).into_owned();
            let v = &v / v.lp_norm(1);
            worst[3] = worst[3].max((tv_node(&an, &v).unwrap() - (1.0 - e.values[k] / lmax).abs()).abs());
        }

        let p: Vec<f64> = random_vector(3, t, 1).iter().copied().collect();
        for kind in [GftKind::AdjacencyBased, GftKind::LaplacianBased] {
            let m = if kind == GftKind::AdjacencyBased { g.weights().clone() } else { l.clone() };
            let b = gft_basis(&g, kind, kind.default_source()).unwrap();
            let h: Vec<f64> =
                b.eigenvalues().iter().map(|&lam| p.iter().rev().fold(0.0, |acc, &c| acc * lam + c)).collect();
            let spectral = filter_matrix(&g, &FilterSpec::spectral(h, kind)).unwrap() * &x;
            worst[4] = worst[4].max((spectral - poly_apply(&m, &p, &x)).amax());
        }

        let coeffs = [1.0, -0.5, 0.25, 0.125];
        let coeffs = &coeffs[..n.min(4)];
        let s = 0.7f64;
        let nu = t as usize % n;
        let scaled: Vec<f64> = coeffs.iter().enumerate().map(|(k, c)| c * s.powi(k as i32)).collect();
        let mut delta = DVector::zeros(n);
        delta[nu] = 1.0;
        let column = poly_apply(g.weights(), &scaled, &delta);
        let w = graph_wavelet(&g, nu, coeffs, s, GftKind::AdjacencyBased).unwrap();
        worst[5] = worst[5].max((w - column).amax());

        let len = 2 + (t as usize % 31);
        let a = random_vector(len, t, 2);
        let r = random_vector(len, t, 3);
        let direct = DVector::from_fn(len, |i, _| (0..len).map(|m| a[m] * r[(i + len - m) % len]).sum::<f64>());
        let via_matrix = cyclic_convolve(&a, &r).unwrap();
        let via_dft = cyclic_convolve_dft(&a, &r).unwrap();
        worst[6] = worst[6].max((&via_matrix - &via_dft).amax()).max((&via_matrix - &direct).amax());
    }

    let secs = started.elapsed().as_secs_f64();
    let tols = [IDENTITY_TOL, 0.0, IDENTITY_TOL, IDENTITY_TOL, IDENTITY_TOL, WAVELET_TOL, IDENTITY_TOL];
    let passed = worst.iter().zip(tols).all(|(w, t)| *w <= t) && secs < 30.0;
    outcome(
        "C1 identity suite",
        passed,
        format!(
            "dft {:.1e}, cyclic laplacian {:.1e}, tv {:.1e}, tv_node {:.1e}, filter {:.1e}, wavelet {:.1e}, convolution {:.1e}; {secs:.2} s",
            worst[0], worst[1], worst[2], worst[3], worst[4], worst[5], worst[6]
        ),
    )
}

fn textbook_pearson(x: &Signal) -> DMatrix<f64> {
    let v = x.values();
    let (n, t) = (v.nrows(), v.ncols() as f64);
    DMatrix::from_fn(n, n, |i, j| {
        let (mi, mj) = (v.row(i).sum() / t, v.row(j).sum() / t);
        let cov: f64 = (0..v.ncols()).map(|k| (v[(i, k)] - mi) * (v[(j, k)] - mj)).sum();
        let si: f64 = (0..v.ncols()).map(|k| (v[(i, k)] - mi).powi(2)).sum::<f64>().sqrt();
        let sj: f64 = (0..v.ncols()).map(|k| (v[(j, k)] - mj).powi(2)).sum::<f64>().sqrt();
        cov / (si * sj)
    })
}

fn criterion_2() -> Outcome {
    let (mut opt, mut grad) = (0.0f64, 0.0f64);
    for t in 0..10 {
        let x = random_signal(5, 200, 100 + t).standardized().unwrap();
        let oracle = textbook_pearson(&x);
        let learned = learn_correlation_graph(&x, 1.0 / 400.0, 10_000).unwrap();
        opt = opt.max((learned.weights - &oracle).amax());
        grad = grad.max(correlation_objective_gradient(&x, &oracle).unwrap().amax());
    }
    outcome(
        "C2 optimizer oracle",
        opt <= OPTIMIZER_TOL && grad <= GRADIENT_TOL,
        format!("max |A - pearson| {opt:.2e} (tol {OPTIMIZER_TOL:.0e}), max gradient {grad:.2e} (tol {GRADIENT_TOL:.0e})"),
    )
}

fn criterion_3() -> Outcome {
    let mut worst = 0.0f64;
    for t in 0..20 {
        let rows = 3 + (t as usize % 6);
        let x = random_signal(rows, 300, 200 + t);
        let b = gft_basis(&Graph::new(covariance_matrix(&x).unwrap()).unwrap(), GftKind::AdjacencyBased, GraphMatrixKind::Adjacency)
            .unwrap();
        let pca = pca_components(&x).unwrap();
        let mut c = x.values().clone();
        for mut row in c.row_iter_mut() {
            let m = row.mean();
            row.add_scalar_mut(-m);
        }
        let svd = c.svd(true, false);
        let u = svd.u.unwrap();
        let mut order: Vec<usize> = (0..rows).collect();
        order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
        for (k, &j) in order.iter().enumerate() {
            let sign = b.mode(k).dot(&u.column(j)).signum();
            let oracle = u.column(j) * sign;
            worst = worst.max((b.mode(k) - &oracle).amax()).max((pca.mode(k) - &oracle).amax());
        }
    }
    outcome("C3 pca equivalence", worst <= PCA_TOL, format!("max mode error up to sign {worst:.2e} (tol {PCA_TOL:.0e})"))
}

fn off_diagonal_sd(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let v: Vec<f64> = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|ij| m[ij]).collect();
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / v.len() as f64).sqrt()
}

fn criterion_4() -> Outcome {
    let started = Instant::now();
    let family = ProfileFamily::default();
    let config = |alpha: f64, profile| SimConfig {
        n_channels: 23,
        n_time: 2048,
        structural_graph: structural_graph(23, SEED).unwrap(),
        alpha,
        beta: 1.0,
        gamma: 1.0,
        profile,
        seed: SEED,
    };
    let h = family.profile(family.peak_hz, 256.0).unwrap();
    let (mut with, mut without) = (0.0, 0.0);
    let reps = 5;
    for s in 0..reps {
        with += off_diagonal_sd(&pearson_matrix(&simulate_sample(&config(0.5, h.clone()), s).unwrap()).unwrap()) / reps as f64;
        without += off_diagonal_sd(&pearson_matrix(&simulate_sample(&config(0.0, h.clone()), s).unwrap()).unwrap()) / reps as f64;
    }
    let ratio = with / without;

    let welch = WelchConfig::default();
    let mut worst_offset = 0i64;
    for d in Difficulty::ALL {
        let (h1, h2) = condition_profiles(&family, d, 256.0).unwrap();
        for profile in [h1, h2] {
            let x = simulate_sample(&config(0.5, profile.clone()), 10).unwrap();
            let mut avg = vec![0.0; welch.n_bins()];
            for c in 0..23 {
                for (a, p) in avg.iter_mut().zip(welch_psd(&x.channel(c), &welch).unwrap()) {
                    *a += p;
                }
            }
            let arg = (0..avg.len()).max_by(|&a, &b| avg[a].total_cmp(&avg[b])).unwrap() as i64;
            let target = (profile.peak_frequency() / welch.bin_frequency(1)).round() as i64;
            worst_offset = worst_offset.max((arg - target).abs());
        }
    }
    let secs = started.elapsed().as_secs_f64();
    outcome(
        "C4 simulator structure",
        ratio >= SPREAD_RATIO && worst_offset <= PEAK_BINS && secs < 60.0,
        format!(
            "correlation spread {with:.3} vs {without:.3} at alpha 0 (ratio {ratio:.2}, need {SPREAD_RATIO}); worst PSD peak offset {worst_offset} bins (max {PEAK_BINS}); {secs:.1} s"
        ),
    )
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn thirds(acc: &[f64]) -> (f64, f64) {
    let third = acc.len() / 3;
    (mean(&acc[acc.len() - third..]), mean(&acc[1..1 + third]))
}

fn desk_config() -> (RunConfig, PathBuf) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/desk.toml");
    (RunConfig::load(Some(&path), &[]).unwrap(), path)
}

fn criterion_5(res: &ExperimentResult, secs: f64) -> Vec<Outcome> {
    use BaselineKind::{Main, SingleChannel};
    use Difficulty::{Difficult, Easy, Medium};
    let lap = GftKind::LaplacianBased;
    let adj = GftKind::AdjacencyBased;
    let mut out = Vec::new();

    let easy = res.accuracies(Easy, Main, lap);
    let dc = easy[0];
    let (argmin, rest_min) =
        easy.iter().enumerate().skip(1).fold((0, f64::INFINITY), |m, (i, &a)| if a < m.1 { (i, a) } else { m });
    // With signed weights the eigenvalue-zero (constant) mode need not come first.
    let curve = res.curve(Easy, Main, lap);
    let zero = (0..curve.len())
        .min_by(|&a, &b| {
            let ev = |i: usize| curve[i].eigenvalue.map_or(f64::INFINITY, f64::abs);
            ev(a).total_cmp(&ev(b))
        })
        .unwrap();
    out.push(outcome(
        "C5a DC is the strict minimum (easy, main, laplacian)",
        dc < rest_min,
        format!(
            "index 0 accuracy {dc:.3}, lowest other {rest_min:.3} at index {argmin}; eigenvalue-zero mode is index {zero} ({:.3})",
            easy[zero]
        ),
    ));

    let main_mean =
        |d: Difficulty| mean(&[res.accuracies(d, Main, adj), res.accuracies(d, Main, lap)].concat());
    let (e, m, h) = (main_mean(Easy), main_mean(Medium), main_mean(Difficult));
    out.push(outcome(
        "C5b difficulty ordering (main, both kinds)",
        e - m >= DIFFICULTY_GAP && m - h >= DIFFICULTY_GAP,
        format!("easy {e:.3}, medium {m:.3}, difficult {h:.3} (gaps {:.3}, {:.3}; need {DIFFICULTY_GAP})", e - m, m - h),
    ));

    let (top, bottom) = thirds(&easy);
    let (top_a, bottom_a) = thirds(&res.accuracies(Easy, Main, adj));
    out.push(outcome(
        "C5c high frequencies beat low (easy, main, laplacian)",
        top - bottom >= FREQUENCY_GAP,
        format!(
            "top third {top:.3}, bottom third {bottom:.3}, gap {:.3} (need {FREQUENCY_GAP}); adjacency gap {:.3}",
            top - bottom,
            top_a - bottom_a
        ),
    ));

    let mut worst_mad = 0.0f64;
    let mut parts = Vec::new();
    for d in Difficulty::ALL {
        let (a, l) = (res.accuracies(d, Main, adj), res.accuracies(d, Main, lap));
        let mad = mean(&a.iter().zip(&l).map(|(x, y)| (x - y).abs()).collect::<Vec<_>>());
        parts.push(format!("{d} {mad:.3}"));
        worst_mad = worst_mad.max(mad);
    }
    out.push(outcome(
        "C5d adjacency vs laplacian agreement (main)",
        worst_mad <= KIND_MAD,
        format!("mean absolute difference {} (max {KIND_MAD})", parts.join(", ")),
    ));

    let single = mean(&res.accuracies(Easy, SingleChannel, lap));
    out.push(outcome(
        "C5e single channel does not beat main high frequencies (easy)",
        single <= top,
        format!("single channel mean {single:.3}, main top third {top:.3}; desk run {secs:.1} s (limit 600 s)"),
    ));
    if secs >= 600.0 {
        out.push(outcome("C5 runtime", false, format!("{secs:.1} s exceeds 600 s")));
    }
    out
}

fn criterion_6(cfg: &RunConfig, first: &Path, scratch: &Path) -> Outcome {
    let second = scratch.join("second");
    let diffs = cfg.profiles.difficulties.clone();
    cmd_run(cfg, &diffs, &second, &mut std::io::sink()).unwrap();
    let a = std::fs::read(first.join("results.csv")).unwrap();
    let b = std::fs::read(second.join("results.csv")).unwrap();
    outcome("C6 reproducibility", a == b, format!("results.csv {} bytes, identical: {}", a.len(), a == b))
}

fn normal_weight_graph(n: usize, trial: u64) -> Graph {
    let mut r = rng::stream(SEED, trial, n as u32, DrawKind::RandomGraph);
    let z = rng::normals(&mut r, n * n);
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..i {
            a[(i, j)] = z[i * n + j];
            a[(j, i)] = z[i * n + j];
        }
    }
    Graph::new(a).unwrap()
}

fn criterion_7() -> Outcome {
    let sizes = [50usize, 100, 200, 400];
    let trials = 3;
    let scores: Vec<f64> = sizes
        .iter()
        .map(|&n| {
            (0..trials).map(|t| adjacency_laplacian_alignment(&normal_weight_graph(n, t), n).unwrap().score).sum::<f64>()
                / trials as f64
        })
        .collect();
    let monotone = scores.windows(2).all(|w| w[1] >= w[0]);
    let shown: Vec<String> = sizes.iter().zip(&scores).map(|(n, s)| format!("N={n}: {s:.4}")).collect();
    outcome("C7 alignment non-decreasing in N", monotone, shown.join(", "))
}

fn main() {
    let mut outcomes = vec![criterion_1(), criterion_2(), criterion_3(), criterion_4()];

    let (cfg, path) = desk_config();
    let scratch = tempfile::tempdir().unwrap();
    let first = scratch.path().join("first");
    let started = Instant::now();
    let diffs = cfg.profiles.difficulties.clone();
    let res = cmd_run(&cfg, &diffs, &first, &mut std::io::sink()).unwrap();
    let secs = started.elapsed().as_secs_f64();
    println!("desk run: {} records from {}", res.records.len(), path.display());
    outcomes.extend(criterion_5(&res, secs));
    outcomes.push(criterion_6(&cfg, &first, scratch.path()));
    outcomes.push(criterion_7());

    let failed: Vec<&Outcome> = outcomes.iter().filter(|o| !o.passed).collect();
    println!("acceptance: {} of {} criteria passed", outcomes.len() - failed.len(), outcomes.len());
    for o in &failed {
        println!("failed: {} ({})", o.id, o.detail);
    }
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
