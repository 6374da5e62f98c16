mod demos;
mod error;
mod io;
mod registry;
mod scene;
mod svg;

use crate::demos::{run_demo, DemoOptions};
use crate::error::{CliError, Result};
use crate::io::{ingest_pgm_histogram, ingest_points, write_csv};
use crate::registry::AppManifold;
use crate::scene::{Scene, Style};
use crate::svg::export_scene;
use bregkern_core::{
    bisector, bregman_divergence, chernoff_information, ekl_ball_curve,
    fenchel_young_divergence, geodesic, skew_jensen_divergence, CoordinateTag, DualCoordinate,
};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use std::fs;
use std::path::PathBuf;
use std::process;

#[derive(Clone, Copy, ValueEnum)]
enum CoordsArg {
    Theta,
    Eta,
    Lambda,
}

impl CoordsArg {
    fn tag(self) -> CoordinateTag {
        match self {
            CoordsArg::Theta => CoordinateTag::theta(),
            CoordsArg::Eta => CoordinateTag::eta(),
            CoordsArg::Lambda => CoordinateTag::lambda(),
        }
    }

    fn dual(self) -> Option<DualCoordinate> {
        match self {
            CoordsArg::Theta => Some(DualCoordinate::Primal),
            CoordsArg::Eta => Some(DualCoordinate::Dual),
            CoordsArg::Lambda => None,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Primal,
    Dual,
}

impl SideArg {
    fn dc(self) -> DualCoordinate {
        match self {
            SideArg::Primal => DualCoordinate::Primal,
            SideArg::Dual => DualCoordinate::Dual,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Bregman,
    Fy,
    Jensen,
    Chernoff,
}

#[derive(Parser)]
#[command(
    name = "bregkern",
    version,
    about = "Dually flat geometry toolkit: divergences, geodesics, centroids, and figure export"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a bundled scenario and write its figures to disk
    Demo {
        /// One of: centroids, ahm, histogram-centroids, chernoff
        name: String,
        /// Output directory for SVG/CSV files
        #[arg(long, default_value = "demo-out")]
        out: PathBuf,
        /// Iteration count for the inductive-mean demo
        #[arg(long, default_value_t = 5)]
        iters: usize,
        /// Skew parameter for centroid demos, strictly inside (0, 1)
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        /// Histogram file for the left input (histogram-centroids)
        #[arg(long)]
        left: Option<PathBuf>,
        /// Histogram file for the right input (histogram-centroids)
        #[arg(long)]
        right: Option<PathBuf>,
    },
    /// Evaluate a dissimilarity between the first points of two files
    Div {
        /// Manifold descriptor, e.g. gaussian:2, categorical:3, psd:2, ekl2d
        #[arg(long)]
        manifold: String,
        /// Chart for sided divergences and default tag for untagged lines
        #[arg(long, value_enum, default_value_t = CoordsArg::Theta)]
        coords: CoordsArg,
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Skew parameter in [-1, 1] for the jensen kind
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        /// Rescale the jensen kind by 4/(1-alpha^2)
        #[arg(long)]
        scaled: bool,
    },
    /// Convert a binary (P5) grayscale PGM image to a 256-bin histogram
    HistFromPgm {
        file: PathBuf,
        /// Write the histogram here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render points and derived geometry to a deterministic SVG
    Export {
        #[arg(long)]
        manifold: String,
        /// Display chart for the figure
        #[arg(long, value_enum, default_value_t = CoordsArg::Lambda)]
        display: CoordsArg,
        /// Two display-coordinate indices to project onto, e.g. 0,1
        #[arg(long, default_value = "0,1")]
        proj: String,
        /// Points file (`tag;v1,v2,...`, bare lines use --coords)
        #[arg(long)]
        points: PathBuf,
        /// Default tag for untagged point lines
        #[arg(long, value_enum, default_value_t = CoordsArg::Lambda)]
        coords: CoordsArg,
        /// Draw this geodesic between each consecutive point pair
        #[arg(long, value_enum)]
        geodesic: Option<SideArg>,
        /// Draw this bisector of the first two points
        #[arg(long, value_enum)]
        bisector: Option<SideArg>,
        /// Draw a metric ellipse of this display radius at every point
        #[arg(long)]
        tissot: Option<f64>,
        /// Draw the extended-KL sphere of this radius around the first point
        #[arg(long)]
        ball: Option<f64>,
        /// Output SVG path
        #[arg(long)]
        out: PathBuf,
        /// Also write the projected point coordinates as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn parse_proj(text: &str) -> Result<(usize, usize)> {
    let mut it = text.split(',');
    let bad = || CliError::invalid(format!("--proj expects two indices like 0,1 (got '{text}')"));
    let i = it.next().ok_or_else(bad)?.trim().parse::<usize>().map_err(|_| bad())?;
    let j = it.next().ok_or_else(bad)?.trim().parse::<usize>().map_err(|_| bad())?;
    if it.next().is_some() {
        return Err(bad());
    }
    Ok((i, j))
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Demo { name, out, iters, alpha, left, right } => {
            let opts = DemoOptions { out_dir: out, iters, alpha, left, right };
            run_demo(&name, &opts)
        }
        Cmd::Div { manifold, coords, left, right, kind, alpha, scaled } => {
            let app = AppManifold::parse(&manifold)?;
            let m = app.manifold();
            let tag = coords.tag();
            let p = &ingest_points(&left, &tag)?[0];
            let q = &ingest_points(&right, &tag)?[0];
            let value = match kind {
                KindArg::Bregman => {
                    let dc = coords.dual().ok_or_else(|| {
                        CliError::invalid("sided divergence needs --coords theta or eta")
                    })?;
                    bregman_divergence(m, p, q, dc)?
                }
                KindArg::Fy => fenchel_young_divergence(m, p, q)?,
                KindArg::Jensen => {
                    let dc = coords.dual().ok_or_else(|| {
                        CliError::invalid("sided divergence needs --coords theta or eta")
                    })?;
                    skew_jensen_divergence(m, p, q, alpha, dc, scaled)?
                }
                KindArg::Chernoff => chernoff_information(m, p, q)?,
            };
            println!("{value:.16e}");
            Ok(())
        }
        Cmd::HistFromPgm { file, out } => {
            let counts = ingest_pgm_histogram(&file)?;
            let text: String = counts.iter().map(|c| format!("{c:.0}\n")).collect();
            match out {
                Some(path) => fs::write(&path, text).map_err(|e| CliError::io(&path, e))?,
                None => print!("{text}"),
            }
            Ok(())
        }
        Cmd::Export {
            manifold,
            display,
            proj,
            points,
            coords,
            geodesic: geo_side,
            bisector: bis_side,
            tissot,
            ball,
            out,
            csv,
        } => {
            let app = AppManifold::parse(&manifold)?;
            let m = app.manifold();
            let pts = ingest_points(&points, &coords.tag())?;
            let mut scene = Scene::new(&manifold, display.tag(), parse_proj(&proj)?);

            if let Some(side) = geo_side {
                for (i, pair) in pts.windows(2).enumerate() {
                    let g = geodesic(m, &pair[0], &pair[1], side.dc())?;
                    let mut style = Style::new("#c0392b");
                    if i == 0 {
                        style = style.label("geodesic");
                    }
                    scene.add_curve(m, &g, 256, style)?;
                }
            }
            if let Some(side) = bis_side {
                if pts.len() < 2 {
                    return Err(CliError::invalid("--bisector needs at least two points"));
                }
                let b = bisector(m, &pts[0], &pts[1], side.dc())?;
                scene.add_bisector_segment(&b, Style::new("#1e8449").label("bisector"))?;
            }
            if let Some(radius) = ball {
                let center = m.convert(&pts[0], &CoordinateTag::theta())?;
                let curve = ekl_ball_curve(&center, radius)?;
                scene.add_curve(m, &curve, 256, Style::new("#7d3c98").label("divergence sphere"))?;
            }
            for p in &pts {
                scene.add_point(m, p, Style::new("#202020"))?;
                if let Some(scale) = tissot {
                    scene.add_tissot(m, p, scale, Style::new("#202020").opacity(0.5))?;
                }
            }

            export_scene(&scene, &out)?;
            if let Some(path) = csv {
                let rows: Vec<Vec<f64>> = pts
                    .iter()
                    .map(|p| scene.project(m, p).map(|v| vec![v[0], v[1]]))
                    .collect::<Result<_>>()?;
                write_csv(&path, &["x", "y"], &rows)?;
            }
            Ok(())
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are successes; anything else is invalid usage.
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            process::exit(code);
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        process::exit(e.exit_code());
    }
}
