//! Region figures rebuilt from their root data.

use std::io;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::regions::{build_region, ContourSystem, RegionError, RegionKind, RegionSpec, SvgScene};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Cubic/quartic pair whose `E_A` has two components and `E_B` one.
pub fn figure1_roots() -> (Vec<Complex64>, Vec<Complex64>) {
    (
        vec![c(0.25, 0.125), c(-0.5, 0.0), c(0.4, 0.0)],
        vec![
            c(1.0 / 9.0, 5.0 / 6.0),
            c(0.125, 0.5),
            c(0.0, 1.0 / 3.0),
            c(0.0, 0.2),
        ],
    )
}

/// Pair used for `E_A`, `D_A` and `Gamma_1`; `beta` are the fourth roots of unity.
pub fn figure4_roots() -> (Vec<Complex64>, Vec<Complex64>) {
    (
        vec![c(1.0 / 3.0, 0.0), c(-0.2, 0.34641), c(-0.2, -0.34641)],
        vec![c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)],
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiguresReport {
    pub e_a_components: usize,
    pub e_b_components: usize,
    pub gamma1_windings_alpha: Vec<i64>,
    pub gamma1_windings_beta: Vec<i64>,
    pub files: Vec<String>,
    pub all_ok: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum FigureError {
    #[error(transparent)]
    Region(#[from] RegionError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn oriented_scene(
    contours: &[(&ContourSystem, &str)],
    alphas: &[Complex64],
    betas: &[Complex64],
) -> SvgScene {
    let mut scene = SvgScene::default();
    for (contour, color) in contours {
        scene.contour(contour, color, Some(color));
        scene.arrows(contour, color);
    }
    scene.markers(alphas, "#1f4e9c", Some("α"));
    scene.markers(betas, "#b03a2e", Some("β"));
    scene
}

/// Builds every figure, writes the SVGs and `figures.json` into `out_dir`
/// and checks component counts and windings.
pub fn run_figures(out_dir: &Path) -> Result<FiguresReport, FigureError> {
    std::fs::create_dir_all(out_dir)?;
    let (a1, b1) = figure1_roots();
    let spec1 = RegionSpec::new(RegionKind::EA, a1.clone(), b1.clone());
    let ea = build_region(&spec1)?;
    let eb = build_region(&spec1.with_kind(RegionKind::EB))?;

    let (a4, b4) = figure4_roots();
    let spec4 = RegionSpec::new(RegionKind::EA, a4.clone(), b4.clone());
    let ea4 = build_region(&spec4)?;
    let da4 = build_region(&spec4.with_kind(RegionKind::DA))?;
    let gamma1 = build_region(&spec4.with_kind(RegionKind::DAEA))?;

    let mut files = Vec::new();
    let mut write = |name: &str, scene: &SvgScene| -> io::Result<()> {
        std::fs::write(out_dir.join(name), scene.render())?;
        files.push(name.to_string());
        Ok(())
    };

    let mut fig1 = SvgScene::default();
    fig1.contour(&ea, "#212f3d", Some("#212f3d"))
        .contour(&eb, "#212f3d", Some("#212f3d"))
        .markers(&a1, "#1f4e9c", Some("α"))
        .markers(&b1, "#b03a2e", Some("β"));
    write("fig1_regions.svg", &fig1)?;
    write(
        "fig3_oriented.svg",
        &oriented_scene(&[(&ea, "#1f4e9c"), (&eb, "#b03a2e")], &a1, &b1),
    )?;
    let mut fig4 = SvgScene::default();
    fig4.contour(&da4, "#909497", Some("#909497"))
        .contour(&ea4, "#212f3d", Some("#212f3d"))
        .markers(&a4, "#1f4e9c", Some("α"))
        .markers(&b4, "#b03a2e", Some("β"));
    write("fig4_ea_da.svg", &fig4)?;
    write(
        "fig5_gamma1.svg",
        &oriented_scene(&[(&gamma1, "#1e8449")], &a4, &b4),
    )?;

    let gamma1_windings_alpha = a4
        .iter()
        .map(|&z| gamma1.winding_number(z))
        .collect::<Result<Vec<_>, _>>()?;
    let gamma1_windings_beta = b4
        .iter()
        .map(|&z| gamma1.winding_number(z))
        .collect::<Result<Vec<_>, _>>()?;
    let all_ok = ea.loop_count == 2
        && eb.loop_count == 1
        && gamma1_windings_alpha.iter().all(|&w| w == 1)
        && gamma1_windings_beta.iter().all(|&w| w == 0);
    let report = FiguresReport {
        e_a_components: ea.loop_count,
        e_b_components: eb.loop_count,
        gamma1_windings_alpha,
        gamma1_windings_beta,
        files,
        all_ok,
    };
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    std::fs::write(out_dir.join("figures.json"), json)?;
    Ok(report)
}
