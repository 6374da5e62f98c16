use crate::error::{CliError, Result};
use crate::io::{ingest_histogram, write_csv};
use crate::scene::{Drawable, DrawableKind, Scene, Style};
use crate::svg::export_scene;
use bregkern_core::manifolds::{
    fisher_rao_curve_length, fisher_rao_geodesic, gaussian_kl, spd_geometric_mean,
    DiscreteMixtureManifold, GaussianManifold, PSDManifold,
};
use bregkern_core::{
    bhattacharyya_distance, bisector, bregman_divergence, chernoff_information, chernoff_point,
    dual_barycenter, geodesic, inductive_midpoint_mean, skew_burbea_rao_barycenter,
    skew_jensen_objective, CoordinateTag, Curve, DualCoordinate, Point,
};
use nalgebra::DMatrix;
use std::fs;
use std::path::{Path, PathBuf};

pub struct DemoOptions {
    pub out_dir: PathBuf,
    pub iters: usize,
    pub alpha: f64,
    pub left: Option<PathBuf>,
    pub right: Option<PathBuf>,
}

impl Default for DemoOptions {
    fn default() -> Self {
        DemoOptions {
            out_dir: PathBuf::from("demo-out"),
            iters: 5,
            alpha: 0.5,
            left: None,
            right: None,
        }
    }
}

/// Six-significant-digit scalar formatting for demo summaries.
fn s6(v: f64) -> String {
    format!("{v:.5e}")
}

pub fn run_demo(name: &str, opts: &DemoOptions) -> Result<()> {
    fs::create_dir_all(&opts.out_dir).map_err(|e| CliError::io(&opts.out_dir, e))?;
    match name {
        "centroids" => demo_centroids(opts),
        "ahm" => demo_ahm(opts),
        "histogram-centroids" => demo_histogram_centroids(opts),
        "chernoff" => demo_chernoff(opts),
        _ => Err(CliError::invalid(format!(
            "unknown demo '{name}' (expected centroids, ahm, histogram-centroids, or chernoff)"
        ))),
    }
}

/// Left/right KL, symmetrized-skew, and Fisher-Rao-midpoint centroids of two
/// bivariate normals, rendered as metric ellipses in mean coordinates.
fn demo_centroids(opts: &DemoOptions) -> Result<()> {
    if !(opts.alpha > 0.0 && opts.alpha < 1.0) {
        return Err(CliError::invalid("--alpha must lie strictly inside (0, 1)"));
    }
    let g = GaussianManifold::new(2)?;
    let m = g.manifold();
    let cov1 = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 1.0]);
    let cov2 = DMatrix::from_row_slice(2, 2, &[1.2, -0.4, -0.4, 0.6]);
    let p1 = g.point_from_mean_cov(&[0.0, 0.0], &cov1)?;
    let p2 = g.point_from_mean_cov(&[3.0, 2.0], &cov2)?;
    let pts = [p1.clone(), p2.clone()];
    let w = [1.0, 1.0];

    // Sided KL centroids are the flat-chart means: the θ-mean minimizes
    // Σ KL(c : pᵢ), the η-mean minimizes Σ KL(pᵢ : c).
    let left_kl = dual_barycenter(m, &pts, &w, DualCoordinate::Primal)?;
    let right_kl = dual_barycenter(m, &pts, &w, DualCoordinate::Dual)?;
    let bhat =
        skew_burbea_rao_barycenter(m, &pts, &w, opts.alpha, DualCoordinate::Primal)
            ?;
    let rao = fisher_rao_geodesic(&g, &p1, &p2)?;
    let rao_mid = rao.point_at(0.5)?;

    println!("[centroids] kl_p1_p2 = {}", s6(gaussian_kl(&g, &p1, &p2)?));
    println!("[centroids] kl_p2_p1 = {}", s6(gaussian_kl(&g, &p2, &p1)?));
    println!(
        "[centroids] bhattacharyya_distance = {}",
        s6(bhattacharyya_distance(m, &p1, &p2)?)
    );
    println!(
        "[centroids] fisher_rao_length = {}",
        s6(fisher_rao_curve_length(&g, &rao, 512)?)
    );

    let named = [
        (&p1, "#202020", "input 1"),
        (&p2, "#202020", "input 2"),
        (&left_kl, "#c0392b", "left KL centroid"),
        (&right_kl, "#2a6fb0", "right KL centroid"),
        (&bhat, "#1e8449", "skew midpoint centroid"),
        (&rao_mid, "#7d3c98", "Fisher-Rao midpoint"),
    ];
    let mut scene = Scene::new("gaussian:2", CoordinateTag::lambda(), (0, 1));
    let mut rows = Vec::new();
    for (p, color, label) in named {
        let (mu, cov) = g.mean_cov(p)?;
        println!("[centroids] {} mu = ({}, {})", label.replace(' ', "_"), s6(mu[0]), s6(mu[1]));
        rows.push(vec![mu[0], mu[1], cov[(0, 0)], cov[(0, 1)], cov[(1, 1)]]);
        scene.add_point(m, p, Style::new(color).label(label))?;
        scene.add_tissot(m, p, 0.3, Style::new(color).opacity(0.8))?;
    }

    write_csv(
        &opts.out_dir.join("centroids.csv"),
        &["mu1", "mu2", "sigma11", "sigma12", "sigma22"],
        &rows,
    )?;
    export_scene(&scene, &opts.out_dir.join("centroids.svg"))?;
    Ok(())
}

/// Alternating arithmetic/harmonic matrix midpoints on the logdet manifold,
/// drawn against both flat geodesics and checked against the closed-form
/// geometric mean.
fn demo_ahm(opts: &DemoOptions) -> Result<()> {
    if opts.iters == 0 {
        return Err(CliError::invalid("--iters must be at least 1"));
    }
    let psd = PSDManifold::new(2)?;
    let m = psd.manifold();
    let a_mat = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 2.0]);
    let b_mat = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.5]);
    let pa = psd.point_from_matrix(&a_mat)?;
    let pb = psd.point_from_matrix(&b_mat)?;
    let oracle = spd_geometric_mean(&a_mat, &b_mat)?;

    let mut scene = Scene::new("psd:2", CoordinateTag::lambda(), (0, 1));
    scene.add_point(m, &pa, Style::new("#202020").label("input A"))?;
    scene.add_point(m, &pb, Style::new("#202020").label("input B"))?;

    let mut cur_a = pa.clone();
    let mut cur_h = pb.clone();
    let mut rows = Vec::new();
    let mut residual = f64::NAN;
    for k in 1..=opts.iters {
        let gp = geodesic(m, &cur_a, &cur_h, DualCoordinate::Primal)?;
        let gd = geodesic(m, &cur_a, &cur_h, DualCoordinate::Dual)?;
        let opacity = if k == 1 { 1.0 } else { 0.3 };
        let mut style_p = Style::new("#c0392b").opacity(opacity);
        let mut style_d = Style::new("#2a6fb0").opacity(opacity);
        if k == 1 {
            style_p = style_p.label("arithmetic path");
            style_d = style_d.label("harmonic path");
        }
        scene.add_curve(m, &gp, 256, style_p)?;
        scene.add_curve(m, &gd, 256, style_d)?;

        cur_a = gp.point_at(0.5)?;
        cur_h = gd.point_at(0.5)?;
        scene.add_point(m, &cur_a, Style::new("#c0392b").opacity(0.3))?;
        scene.add_point(m, &cur_h, Style::new("#2a6fb0").opacity(0.3))?;

        let ma = psd.matrix_of(&cur_a)?;
        let mh = psd.matrix_of(&cur_h)?;
        residual = (&ma - &oracle).norm();
        println!("[ahm] iteration {k} residual = {}", s6(residual));
        rows.push(vec![
            k as f64,
            ma[(0, 0)],
            ma[(0, 1)],
            ma[(1, 1)],
            mh[(0, 0)],
            mh[(0, 1)],
            mh[(1, 1)],
            residual,
        ]);
    }

    let mean = inductive_midpoint_mean(m, &pa, &pb, opts.iters)?;
    let mean_mat = psd.matrix_of(&mean)?;
    scene.add_point(m, &mean, Style::new("#7d3c98").label("inductive mean"))?;

    println!("[ahm] final_residual = {}", s6(residual));
    println!(
        "[ahm] mean_upper = {} {} {}",
        s6(mean_mat[(0, 0)]),
        s6(mean_mat[(0, 1)]),
        s6(mean_mat[(1, 1)])
    );

    write_csv(
        &opts.out_dir.join("ahm.csv"),
        &["iteration", "a11", "a12", "a22", "h11", "h12", "h22", "residual"],
        &rows,
    )?;
    export_scene(&scene, &opts.out_dir.join("ahm.svg"))?;
    Ok(())
}

/// Deterministic bundled inputs for the histogram demo: two smooth intensity
/// profiles over 256 bins.
fn default_histograms(k: usize) -> (Vec<f64>, Vec<f64>) {
    let mut left = Vec::with_capacity(k);
    let mut right = Vec::with_capacity(k);
    for i in 0..k {
        let x = i as f64;
        let g = |c: f64, s: f64| (-((x - c) / s).powi(2) / 2.0).exp();
        left.push(100.0 * g(90.0, 25.0) + 30.0 * g(200.0, 15.0));
        right.push(100.0 * g(160.0, 35.0));
    }
    (left, right)
}

fn materialize_histogram(
    given: &Option<PathBuf>,
    fallback_counts: &[f64],
    fallback_path: &Path,
) -> Result<Vec<f64>> {
    let path = match given {
        Some(p) => p.clone(),
        None => {
            let text: String =
                fallback_counts.iter().map(|c| format!("{c:.16e}\n")).collect();
            fs::write(fallback_path, text).map_err(|e| CliError::io(fallback_path, e))?;
            fallback_path.to_path_buf()
        }
    };
    ingest_histogram(&path)
}

/// Jensen-Shannon and Jeffreys centroids of two histograms, via the CCCP
/// fixed point on the discrete mixture family in each flat chart.
fn demo_histogram_centroids(opts: &DemoOptions) -> Result<()> {
    if !(opts.alpha > 0.0 && opts.alpha < 1.0) {
        return Err(CliError::invalid("--alpha must lie strictly inside (0, 1)"));
    }
    let (def_l, def_r) = default_histograms(256);
    let h1 = materialize_histogram(&opts.left, &def_l, &opts.out_dir.join("hist_left.csv"))?;
    let h2 = materialize_histogram(&opts.right, &def_r, &opts.out_dir.join("hist_right.csv"))?;
    if h1.len() != h2.len() {
        return Err(CliError::invalid(format!(
            "histogram lengths differ: {} vs {}",
            h1.len(),
            h2.len()
        )));
    }

    let mix = DiscreteMixtureManifold::new(h1.len())?;
    let m = mix.manifold();
    let p1 = mix.point_from_weights(&h1)?;
    let p2 = mix.point_from_weights(&h2)?;
    let pts = [p1.clone(), p2.clone()];
    let w = [1.0, 1.0];

    // Jensen-Shannon centroid: skew Jensen minimizer in the mixture chart.
    // Jeffreys centroid: the same fixed point run in the dual chart.
    let js = skew_burbea_rao_barycenter(m, &pts, &w, opts.alpha, DualCoordinate::Primal)
        ?;
    let jeff = skew_burbea_rao_barycenter(m, &pts, &w, opts.alpha, DualCoordinate::Dual)
        ?;

    let lambda = CoordinateTag::lambda();
    let js_w = m.convert(&js, &lambda)?.data;
    let jeff_w = m.convert(&jeff, &lambda)?.data;

    let js_obj = skew_jensen_objective(m, &pts, &w, opts.alpha, DualCoordinate::Primal, &js.data)
        ?;
    let jeff_obj = skew_jensen_objective(m, &pts, &w, opts.alpha, DualCoordinate::Dual, &jeff.data)
        ?;
    let kl = bregman_divergence(m, &p1, &p2, DualCoordinate::Primal)?;
    println!("[histogram-centroids] kl_left_right = {}", s6(kl));
    println!("[histogram-centroids] js_objective = {}", s6(js_obj));
    println!("[histogram-centroids] jeffreys_objective = {}", s6(jeff_obj));

    let mut rows = Vec::with_capacity(h1.len());
    for i in 0..h1.len() {
        rows.push(vec![i as f64, h1[i], h2[i], js_w[i], jeff_w[i]]);
    }
    write_csv(
        &opts.out_dir.join("histogram-centroids.csv"),
        &["bin", "left", "right", "js", "jeffreys"],
        &rows,
    )?;

    // The curves live on the bin axis, so they are pushed as raw display
    // polylines rather than manifold samples.
    let mut scene = Scene::new(&format!("mixture:{}", h1.len()), lambda, (0, 1));
    let as_curve = |h: &[f64]| -> Vec<[f64; 2]> {
        h.iter().enumerate().map(|(i, v)| [i as f64, *v]).collect()
    };
    for (h, color, label) in [
        (&h1, "#808080", "left histogram"),
        (&h2, "#b0b0b0", "right histogram"),
        (&js_w, "#c0392b", "Jensen-Shannon centroid"),
        (&jeff_w, "#2a6fb0", "Jeffreys centroid"),
    ] {
        scene.items.push(Drawable {
            kind: DrawableKind::Curve(as_curve(h)),
            style: Style::new(color).label(label),
        });
    }
    export_scene(&scene, &opts.out_dir.join("histogram-centroids.svg"))?;
    Ok(())
}

/// Chernoff point of two univariate normals: bisection along the primal
/// geodesic, drawn in dual display coordinates with both geodesics and the
/// dual bisector.
fn demo_chernoff(opts: &DemoOptions) -> Result<()> {
    let g = GaussianManifold::new(1)?;
    let m = g.manifold();
    let p = Point::lambda(vec![0.0, 1.0])?;
    let q = Point::lambda(vec![1.0, 1.5])?;

    let alpha_star = chernoff_point(m, &p, &q)?;
    let info = chernoff_information(m, &p, &q)?;
    println!("[chernoff] alpha_star = {}", s6(alpha_star));
    println!("[chernoff] information = {}", s6(info));

    let geo_p = geodesic(m, &p, &q, DualCoordinate::Primal)?;
    let geo_d = geodesic(m, &p, &q, DualCoordinate::Dual)?;
    // point_at interpolates source→dest, so the exponential-arc point at
    // weight α on the source sits at parameter 1−α.
    let cpoint = geo_p.point_at(1.0 - alpha_star)?;
    let bis = bisector(m, &p, &q, DualCoordinate::Dual)?;

    let mut scene = Scene::new("gaussian:1", CoordinateTag::eta(), (0, 1));
    scene.add_curve(m, &geo_p, 256, Style::new("#c0392b").label("primal geodesic"))?;
    scene.add_curve(m, &geo_d, 256, Style::new("#2a6fb0").label("dual geodesic"))?;
    scene.add_bisector_segment(&bis, Style::new("#1e8449").opacity(0.7).label("dual bisector"))?;
    scene.add_point(m, &p, Style::new("#202020").label("source"))?;
    scene.add_point(m, &q, Style::new("#202020").label("target"))?;
    scene.add_point(m, &cpoint, Style::new("#e67e22").label("Chernoff point"))?;
    scene.add_tissot(m, &p, 0.15, Style::new("#202020").opacity(0.5))?;
    scene.add_tissot(m, &q, 0.15, Style::new("#202020").opacity(0.5))?;

    let eta = m.coords_in(&cpoint, DualCoordinate::Dual)?;
    write_csv(
        &opts.out_dir.join("chernoff.csv"),
        &["alpha_star", "information", "chernoff_eta1", "chernoff_eta2"],
        &[vec![alpha_star, info, eta[0], eta[1]]],
    )?;
    export_scene(&scene, &opts.out_dir.join("chernoff.svg"))?;
    Ok(())
}
