//! CSV snapshot files.
//!
//! A snapshot starts with `# key=value` header lines followed by a column
//! header and one row per cell centre. Numbers are written with 17
//! significant digits so that re-reading recovers every value bit for bit.

use std::fmt::Write as _;
use std::path::Path;

use dem_core::regime::RNG_ID;
use dem_core::scheme::Grid1D;
use dem_core::state::{mixture_from_primitives, MixtureCell, Primitive};
use dem_core::{EosParams, RunConfig, Snapshot};

use crate::{CliError, Result};

pub const COLUMNS: [&str; 12] = [
    "x", "alpha1", "rho1", "u1", "p1", "rho2", "u2", "p2", "rho_mix", "u_mix", "p_mix", "r_left_interface",
];

#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotTable {
    /// Header entries in file order.
    pub meta: Vec<(String, String)>,
    pub rows: Vec<[f64; 12]>,
}

impl SnapshotTable {
    pub fn meta(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn meta_f64(&self, key: &str) -> Option<f64> {
        self.meta(key)?.parse().ok()
    }

    pub fn t(&self) -> Option<f64> {
        self.meta_f64("t")
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = COLUMNS.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn from_snapshot(snap: &Snapshot, config: &RunConfig) -> Result<Self> {
        let grid = &snap.grid;
        let [e1, e2] = grid.eos;
        let meta = [
            ("t", format!("{:.16e}", snap.t)),
            ("n_cells", grid.n_cells().to_string()),
            ("x_min", format!("{:.16e}", grid.x_min)),
            ("x_max", format!("{:.16e}", grid.x_max)),
            ("seed", config.seed.to_string()),
            ("cfl", config.cfl.to_string()),
            ("relaxation", config.relaxation.to_string()),
            ("regime", config.regime.describe()),
            ("rng", RNG_ID.to_string()),
            ("gamma1", format!("{:.16e}", e1.gamma)),
            ("pi1", format!("{:.16e}", e1.pi_inf)),
            ("gamma2", format!("{:.16e}", e2.gamma)),
            ("pi2", format!("{:.16e}", e2.pi_inf)),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
        let prims = grid.primitives()?;
        let rows = grid
            .cells
            .iter()
            .zip(prims)
            .enumerate()
            .map(|(i, (c, [v1, v2]))| {
                let (rho, u, p) = mixture_from_primitives(c.phase1.alpha, &v1, c.phase2.alpha, &v2);
                [
                    grid.x_center(i),
                    c.phase1.alpha,
                    v1.rho,
                    v1.u,
                    v1.p,
                    v2.rho,
                    v2.u,
                    v2.p,
                    rho,
                    u,
                    p,
                    snap.regime[i],
                ]
            })
            .collect();
        Ok(Self { meta, rows })
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.meta {
            let _ = writeln!(s, "# {k}={v}");
        }
        s.push_str(&COLUMNS.join(","));
        s.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(|x| format!("{x:.16e}")).collect();
            s.push_str(&fields.join(","));
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str, path: &str) -> Result<Self> {
        let bad = |line: usize, m: String| CliError::Snapshot { path: path.to_string(), message: format!("line {line}: {m}") };
        let mut meta = Vec::new();
        let mut rows = Vec::new();
        let mut header_seen = false;
        for (idx, line) in text.lines().enumerate() {
            let n = idx + 1;
            if let Some(rest) = line.strip_prefix('#') {
                let (k, v) = rest
                    .trim()
                    .split_once('=')
                    .ok_or_else(|| bad(n, format!("malformed header `{line}`")))?;
                meta.push((k.trim().to_string(), v.trim().to_string()));
            } else if !header_seen {
                if line.split(',').map(str::trim).ne(COLUMNS.iter().copied()) {
                    return Err(bad(n, format!("unexpected column header `{line}`")));
                }
                header_seen = true;
            } else if !line.trim().is_empty() {
                let vals: Vec<f64> = line
                    .split(',')
                    .map(|f| f.trim().parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| bad(n, e.to_string()))?;
                let row: [f64; 12] = vals
                    .try_into()
                    .map_err(|v: Vec<f64>| bad(n, format!("expected 12 columns, got {}", v.len())))?;
                rows.push(row);
            }
        }
        if !header_seen {
            return Err(bad(0, "missing column header".into()));
        }
        Ok(Self { meta, rows })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    /// Rebuilds the grid from the primitive columns and the EOS in the header.
    /// Phase 2 takes the fraction `1 - alpha1`.
    pub fn to_grid(&self) -> Result<Grid1D> {
        let missing = |k: &str| CliError::Snapshot { path: String::new(), message: format!("header lacks `{k}`") };
        let get = |k: &str| self.meta_f64(k).ok_or_else(|| missing(k));
        let eos = [EosParams::new(get("gamma1")?, get("pi1")?)?, EosParams::new(get("gamma2")?, get("pi2")?)?];
        let cells = self
            .rows
            .iter()
            .map(|r| {
                MixtureCell::from_primitives(
                    r[1],
                    &Primitive::new(r[2], r[3], r[4]),
                    &Primitive::new(r[5], r[6], r[7]),
                    &eos[0],
                    &eos[1],
                )
                .map_err(CliError::from)
            })
            .collect::<Result<_>>()?;
        Ok(Grid1D::new(get("x_min")?, get("x_max")?, cells, eos)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::preset;
    use dem_core::scheme::run;

    fn short_run() -> (Snapshot, RunConfig) {
        let mut cfg = preset("t6_dense_to_dilute").unwrap().run;
        cfg.n_cells = 40;
        cfg.t_end = 2e-6;
        cfg.seed = 11;
        (run(&cfg).unwrap().pop().unwrap(), cfg)
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let (snap, cfg) = short_run();
        let table = SnapshotTable::from_snapshot(&snap, &cfg).unwrap();
        let back = SnapshotTable::parse(&table.to_csv(), "mem").unwrap();
        assert_eq!(back, table);
        assert_eq!(back.t(), Some(2e-6));
        assert_eq!(back.meta("seed"), Some("11"));
        assert_eq!(back.meta("rng"), Some(RNG_ID));
        let grid = back.to_grid().unwrap();
        let again = SnapshotTable::from_snapshot(&Snapshot { grid, ..snap.clone() }, &cfg).unwrap();
        for (a, b) in again.rows.iter().zip(&table.rows) {
            for j in 0..12 {
                assert!((a[j] - b[j]).abs() <= 1e-12 * b[j].abs().max(1e-12), "column {}", COLUMNS[j]);
            }
        }
    }

    #[test]
    fn uniform_grid_gives_constant_columns() {
        let mut cfg = preset("t1_uniform_vf").unwrap().run;
        cfg.n_cells = 10;
        cfg.right = cfg.left;
        cfg.t_end = 1e-6;
        let snap = run(&cfg).unwrap().pop().unwrap();
        let table = SnapshotTable::from_snapshot(&snap, &cfg).unwrap();
        for name in ["alpha1", "rho1", "p2", "rho_mix"] {
            let col = table.column(name).unwrap();
            assert!(col.iter().all(|&v| (v - col[0]).abs() <= 1e-12 * col[0].abs()), "{name}");
        }
        assert!(table.to_csv().lines().filter(|l| !l.starts_with('#')).all(|l| l.split(',').count() == 12));
    }

    #[test]
    fn rejects_wrong_column_count() {
        let text = format!("# t=0\n{}\n1,2,3\n", COLUMNS.join(","));
        assert!(SnapshotTable::parse(&text, "mem").is_err());
    }
}
