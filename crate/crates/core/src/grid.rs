//! Tables of `F_N^{(r,s)}` over `(r, s)` and their CSV and SVG renderings.

use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::efp::{efp_hom_by, EfpValue, Method};
use crate::error::{Error, Result};
use crate::model::HomParams;

pub const CSV_HEADER: &str = "N,r,s,value,method,imag_residual";

#[derive(Clone, Debug)]
pub struct EfpGrid {
    pub n: usize,
    pub s_max: usize,
    /// Row-major over `r = 1..N`, then `s = 1..s_max`.
    pub cells: Vec<EfpValue>,
}

impl EfpGrid {
    pub fn cell(&self, r: usize, s: usize) -> &EfpValue {
        &self.cells[(r - 1) * self.s_max + (s - 1)]
    }

    pub fn to_csv(&self, digits: usize) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for c in &self.cells {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{:.3e}",
                c.n,
                c.r,
                c.s,
                c.value.format_decimal(digits),
                c.method,
                c.value.im_f64().abs()
            );
        }
        out
    }

    /// Gray scale heat map, `r` down the rows and `s` across the columns;
    /// 0 is white and 1 is black.
    pub fn to_svg(&self) -> String {
        const CELL: usize = 40;
        const MARGIN: usize = 30;
        let width = MARGIN + CELL * self.s_max;
        let height = MARGIN + CELL * self.n;
        let mut out = String::new();
        let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
        );
        let _ = writeln!(out, r#"<title>F_{}^(r,s)</title>"#, self.n);
        for s in 1..=self.s_max {
            let x = MARGIN + CELL * (s - 1) + CELL / 2;
            let _ = writeln!(out, r#"<text x="{x}" y="20" font-size="12" text-anchor="middle">s={s}</text>"#);
        }
        for r in 1..=self.n {
            let y = MARGIN + CELL * (r - 1) + CELL / 2 + 4;
            let _ = writeln!(out, r#"<text x="2" y="{y}" font-size="12">r={r}</text>"#);
        }
        for c in &self.cells {
            let v = c.value.re_f64().clamp(0.0, 1.0);
            let gray = (255.0 * (1.0 - v)).round() as u8;
            let x = MARGIN + CELL * (c.s - 1);
            let y = MARGIN + CELL * (c.r - 1);
            let _ = writeln!(
                out,
                r#"<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="rgb({gray},{gray},{gray})" stroke="none"><title>r={} s={} F={:.6}</title></rect>"#,
                c.r, c.s, v
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

/// `F_N^{(r,s)}` for `r = 1..N`, `s = 1..s_max`, with up to `workers`
/// threads; cells are stored in a fixed order regardless of scheduling.
pub fn sweep(p: &HomParams, n: usize, s_max: usize, method: Method, workers: usize) -> Result<EfpGrid> {
    if s_max == 0 || s_max > n {
        return Err(Error::IndexOutOfRange(format!("need 1 <= smax <= N = {n}, got {s_max}")));
    }
    let jobs: Vec<(usize, usize)> = (1..=n).flat_map(|r| (1..=s_max).map(move |s| (r, s))).collect();
    for &(r, s) in &jobs {
        method.check_homogeneous(n, r, s)?;
    }
    let slots: Vec<Mutex<Option<Result<EfpValue>>>> = jobs.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = workers.clamp(1, jobs.len());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(r, s)) = jobs.get(i) else { break };
                let res = efp_hom_by(method, p, n, r, s);
                *slots[i].lock().expect("slot lock") = Some(res);
            });
        }
    });
    let cells = slots
        .into_iter()
        .map(|m| m.into_inner().expect("slot lock").expect("every job ran"))
        .collect::<Result<Vec<_>>>()?;
    Ok(EfpGrid { n, s_max, cells })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::InhomParams;
    use crate::numerics::Precision;
    use crate::oracle;

    #[test]
    fn ice_point_column() {
        let p = Precision::new(128);
        let ice = HomParams::ice_point(p);
        let g = sweep(&ice, 3, 1, Method::DetHom, 2).unwrap();
        for (r, k) in [(1, 2), (2, 5), (3, 7)] {
            assert!(g.cell(r, 1).value.rel_dev(&p.ratio(k, 7)) < 1e-100);
        }
        let csv = g.to_csv(30);
        assert!(csv.starts_with(CSV_HEADER));
        assert_eq!(csv.lines().count(), 4);
        let line = csv.lines().nth(2).unwrap();
        assert!(line.starts_with("3,2,1,0.71428571428571428571428571428"), "{line}");
    }

    #[test]
    fn zero_structure_and_oracle() {
        let p = Precision::new(128);
        let hp = HomParams::new(p, p.real(1.5), p.real(0.35)).unwrap();
        let g = sweep(&hp, 4, 3, Method::Mir1, 3).unwrap();
        for c in &g.cells {
            if c.s > c.r {
                assert!(c.value.is_zero());
            }
        }
        let g2 = sweep(&hp, 2, 2, Method::Ortho, 1).unwrap();
        let inh = InhomParams::homogeneous(&hp, 2);
        for c in &g2.cells {
            let want = oracle::brute_efp(&inh, c.r, c.s).unwrap();
            assert!(c.value.abs_dev(&want) < 1e-80);
        }
    }

    #[test]
    fn svg_has_one_rect_per_cell() {
        let p = Precision::new(64);
        let ice = HomParams::ice_point(p);
        let g = sweep(&ice, 4, 2, Method::DetHom, 4).unwrap();
        let svg = g.to_svg();
        assert_eq!(svg.matches("<rect ").count(), 8);
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn caps_are_checked_up_front() {
        let p = Precision::new(64);
        let ice = HomParams::ice_point(p);
        assert!(matches!(sweep(&ice, 4, 3, Method::Mir3, 1), Err(Error::SizeCap { .. })));
        assert!(sweep(&ice, 3, 4, Method::DetHom, 1).is_err());
    }
}
