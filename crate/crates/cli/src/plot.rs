//! Gnuplot script plus whitespace-separated data file.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

/// Columns `t a b sigma2`; `sigma2` may be missing at some rows.
pub struct Series<'a> {
    pub title: &'a str,
    pub t: &'a [f64],
    pub a: &'a [f64],
    pub b: &'a [f64],
    pub sigma2: Vec<Option<f64>>,
}

/// Writes `<prefix>.dat` and `<prefix>.gp`, returning both paths.
pub fn write(prefix: &Path, s: &Series) -> io::Result<(PathBuf, PathBuf)> {
    let dat = prefix.with_extension("dat");
    let gp = prefix.with_extension("gp");
    let mut data = String::from("# t a b sigma2\n");
    for i in 0..s.t.len() {
        let s2 = s.sigma2[i].map_or_else(|| "NaN".to_string(), |v| format!("{v:.16e}"));
        data += &format!("{:.16e} {:.16e} {:.16e} {s2}\n", s.t[i], s.a[i], s.b[i]);
    }
    fs::write(&dat, data)?;
    let name = dat
        .file_name()
        .and_then(|n| n.to_str())
        .unwrap_or("plot.dat");
    let script = format!(
        "set title \"{}\"\nset xlabel \"t\"\nset key outside\nset multiplot layout 2,1\n\
         plot \"{name}\" using 1:2 with linespoints title \"a(t)\", \\\n     \"{name}\" using 1:3 with linespoints title \"b(t)\"\n\
         plot \"{name}\" using 1:4 with linespoints title \"sigma2(t)\"\nunset multiplot\n",
        s.title
    );
    fs::write(&gp, script)?;
    Ok((dat, gp))
}
