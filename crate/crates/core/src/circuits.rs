//! Gate-level Gaussian circuits and the divide-and-conquer compiler for the
//! Gaussian Fourier transform (GFT).
//!
//! A `2N`-mode GFT is built from
//!
//! 1. a perfect shuffle moving mode `2k` to `k` and `2k+1` to `N+k`,
//! 2. two `N`-mode GFTs on the halves, run in parallel,
//! 3. phase rotations by `pi k / N` on modes `N+k`, `k = 1..N-1`,
//! 4. a two-mode GFT on each pair `(k, N+k)`.
//!
//! The two-mode GFT `(a, b) -> ((a+b)/sqrt2, (a-b)/sqrt2)` is emitted as a
//! `pi/4` beam splitter followed by a `pi` phase rotation on the second mode,
//! so the two-mode transform costs two gates in two layers.
//!
//! Only power-of-two widths compile. Arbitrary `N` is available at the
//! covariance level through [`gft_symplectic`] and the state constructors.

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::error::{invalid_arg, Error, Result};
use crate::states::{CorrelatedSpec, CovarianceState};
use crate::symplectic::{rotation, CovMatrix, QuadratureVector};

/// Elementary Gaussian gate. Matrices below act on `(q, p)` pairs of the
/// listed modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    /// `a -> e^{i theta} a`, symplectic block `R(theta)`.
    PhaseRotation { mode: usize, theta: f64 },
    /// `a -> cos a + sin b`, `b -> -sin a + cos b`; `theta = pi/4` is 50:50.
    BeamSplitter { a: usize, b: usize, theta: f64 },
    /// `[[cosh r I, sinh r Z], [sinh r Z, cosh r I]]` with `cosh^2 r = gain`.
    TwoModeSqueeze { a: usize, b: usize, gain: f64 },
    /// Exchanges the contents of two modes.
    Swap { a: usize, b: usize },
}

impl Gate {
    pub fn modes(&self) -> Vec<usize> {
        match *self {
            Gate::PhaseRotation { mode, .. } => vec![mode],
            Gate::BeamSplitter { a, b, .. }
            | Gate::TwoModeSqueeze { a, b, .. }
            | Gate::Swap { a, b } => vec![a, b],
        }
    }

    pub fn is_swap(&self) -> bool {
        matches!(self, Gate::Swap { .. })
    }

    fn validate(&self, width: usize) -> Result<()> {
        let modes = self.modes();
        if let Some(&m) = modes.iter().find(|&&m| m >= width) {
            return invalid_arg(format!("{self} touches mode {m} outside width {width}"));
        }
        if modes.len() == 2 && modes[0] == modes[1] {
            return invalid_arg(format!("{self} acts twice on mode {}", modes[0]));
        }
        match *self {
            Gate::TwoModeSqueeze { gain, .. } if !(gain >= 1.0) || !gain.is_finite() => {
                invalid_arg(format!("squeezer gain must be >= 1, got {gain}"))
            }
            Gate::PhaseRotation { theta, .. } | Gate::BeamSplitter { theta, .. }
                if !theta.is_finite() =>
            {
                invalid_arg("gate angle must be finite")
            }
            _ => Ok(()),
        }
    }

    /// Left-multiplies the rows of `s` belonging to this gate's modes by the
    /// gate's symplectic matrix.
    fn apply_left(&self, s: &mut DMatrix<f64>) {
        let cols = s.ncols();
        match *self {
            Gate::PhaseRotation { mode, theta } => {
                let r = rotation(theta);
                for c in 0..cols {
                    let (q, p) = (s[(2 * mode, c)], s[(2 * mode + 1, c)]);
                    s[(2 * mode, c)] = r[(0, 0)] * q + r[(0, 1)] * p;
                    s[(2 * mode + 1, c)] = r[(1, 0)] * q + r[(1, 1)] * p;
                }
            }
            Gate::BeamSplitter { a, b, theta } => {
                let (sn, cs) = theta.sin_cos();
                for c in 0..cols {
                    for k in 0..2 {
                        let (x, y) = (s[(2 * a + k, c)], s[(2 * b + k, c)]);
                        s[(2 * a + k, c)] = cs * x + sn * y;
                        s[(2 * b + k, c)] = -sn * x + cs * y;
                    }
                }
            }
            Gate::TwoModeSqueeze { a, b, gain } => {
                let ch = gain.sqrt();
                let sh = (gain - 1.0).max(0.0).sqrt();
                for c in 0..cols {
                    for (k, z) in [(0, 1.0), (1, -1.0)] {
                        let (x, y) = (s[(2 * a + k, c)], s[(2 * b + k, c)]);
                        s[(2 * a + k, c)] = ch * x + z * sh * y;
                        s[(2 * b + k, c)] = z * sh * x + ch * y;
                    }
                }
            }
            Gate::Swap { a, b } => {
                s.swap_rows(2 * a, 2 * b);
                s.swap_rows(2 * a + 1, 2 * b + 1);
            }
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::PhaseRotation { mode, theta } => write!(f, "R {mode} {theta:?}"),
            Gate::BeamSplitter { a, b, theta } => write!(f, "BS {a} {b} {theta:?}"),
            Gate::TwoModeSqueeze { a, b, gain } => write!(f, "S2 {a} {b} {gain:?}"),
            Gate::Swap { a, b } => write!(f, "SWAP {a} {b}"),
        }
    }
}

impl FromStr for Gate {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let parts: Vec<&str> = line.split_whitespace().collect();
        let bad = || Error::InvalidArgument(format!("malformed gate line `{line}`"));
        let mode = |i: usize| -> Result<usize> {
            parts.get(i).ok_or_else(bad)?.parse().map_err(|_| bad())
        };
        let real =
            |i: usize| -> Result<f64> { parts.get(i).ok_or_else(bad)?.parse().map_err(|_| bad()) };
        let (gate, arity) = match parts.first().copied() {
            Some("R") => (
                Gate::PhaseRotation {
                    mode: mode(1)?,
                    theta: real(2)?,
                },
                3,
            ),
            Some("BS") => (
                Gate::BeamSplitter {
                    a: mode(1)?,
                    b: mode(2)?,
                    theta: real(3)?,
                },
                4,
            ),
            Some("S2") => (
                Gate::TwoModeSqueeze {
                    a: mode(1)?,
                    b: mode(2)?,
                    gain: real(3)?,
                },
                4,
            ),
            Some("SWAP") => (
                Gate::Swap {
                    a: mode(1)?,
                    b: mode(2)?,
                },
                3,
            ),
            _ => return Err(bad()),
        };
        if parts.len() != arity {
            return Err(bad());
        }
        Ok(gate)
    }
}

/// Gates arranged in layers; gates within a layer touch disjoint modes, so
/// the depth is the number of layers.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianCircuit {
    width: usize,
    layers: Vec<Vec<Gate>>,
}

impl GaussianCircuit {
    pub fn new(width: usize) -> Result<Self> {
        if width == 0 {
            return invalid_arg("circuit width must be positive");
        }
        Ok(Self {
            width,
            layers: Vec::new(),
        })
    }

    /// Appends a layer after checking that its gates are valid and disjoint.
    /// Empty layers are dropped.
    pub fn push_layer(&mut self, gates: Vec<Gate>) -> Result<()> {
        let mut used = vec![false; self.width];
        for g in &gates {
            g.validate(self.width)?;
            for m in g.modes() {
                if used[m] {
                    return invalid_arg(format!("mode {m} used twice in one layer"));
                }
                used[m] = true;
            }
        }
        if !gates.is_empty() {
            self.layers.push(gates);
        }
        Ok(())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn layers(&self) -> &[Vec<Gate>] {
        &self.layers
    }

    pub fn gates(&self) -> impl Iterator<Item = &Gate> {
        self.layers.iter().flatten()
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// All gates, SWAPs included.
    pub fn gate_count(&self) -> usize {
        self.gates().count()
    }

    /// Rotations, beam splitters and squeezers, i.e. everything but SWAPs.
    pub fn operation_count(&self) -> usize {
        self.gates().filter(|g| !g.is_swap()).count()
    }

    pub fn swap_count(&self) -> usize {
        self.gates().filter(|g| g.is_swap()).count()
    }

    /// Where each input mode's content ends up, for SWAP-only circuits.
    /// `result[x]` is the output position of the content that started at `x`.
    pub fn mode_permutation(&self) -> Option<Vec<usize>> {
        // position -> original label currently held there
        let mut held: Vec<usize> = (0..self.width).collect();
        for g in self.gates() {
            match *g {
                Gate::Swap { a, b } => held.swap(a, b),
                _ => return None,
            }
        }
        let mut dest = vec![0; self.width];
        for (pos, &label) in held.iter().enumerate() {
            dest[label] = pos;
        }
        Some(dest)
    }

    /// Line-oriented export: a `# width N` header, one gate per line, a blank
    /// line between layers. Angles use shortest round-trip float formatting.
    pub fn to_text(&self) -> String {
        let mut out = format!("# width {}\n", self.width);
        for (i, layer) in self.layers.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            for g in layer {
                out.push_str(&g.to_string());
                out.push('\n');
            }
        }
        out
    }

    /// Parses [`Self::to_text`] output.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut width = None;
        let mut layers: Vec<Vec<Gate>> = vec![Vec::new()];
        for line in text.lines() {
            let line = line.trim();
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(w) = rest.trim().strip_prefix("width") {
                    width = Some(w.trim().parse::<usize>().map_err(|_| {
                        Error::InvalidArgument(format!("bad width header `{line}`"))
                    })?);
                }
            } else if line.is_empty() {
                if !layers.last().is_some_and(Vec::is_empty) {
                    layers.push(Vec::new());
                }
            } else {
                layers.last_mut().expect("non-empty").push(line.parse()?);
            }
        }
        let width = match width {
            Some(w) => w,
            None => layers
                .iter()
                .flatten()
                .flat_map(|g| g.modes())
                .max()
                .map_or(1, |m| m + 1),
        };
        let mut circuit = Self::new(width)?;
        for layer in layers {
            circuit.push_layer(layer)?;
        }
        Ok(circuit)
    }

    /// Applies the circuit to the vacuum on all `width` modes.
    pub fn act_on_vacuum(&self) -> Result<CovarianceState> {
        let s = circuit_to_symplectic(self);
        let cov = CovMatrix::identity_scaled(self.width, 0.5).conjugate(&s)?;
        CovarianceState::from_parts(QuadratureVector::zeros(self.width), cov)
    }
}

impl fmt::Display for GaussianCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Symplectic matrix of the `n`-mode GFT: block `(j, k)` is
/// `R(2 pi j k / n) / sqrt(n)`.
pub fn gft_symplectic(n: usize) -> Result<DMatrix<f64>> {
    if n == 0 {
        return invalid_arg("GFT needs at least one mode");
    }
    let scale = 1.0 / (n as f64).sqrt();
    let mut s = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        for k in 0..n {
            // reduce j k mod n before scaling to keep the angle accurate
            let theta = 2.0 * PI * ((j * k) % n) as f64 / n as f64;
            s.fixed_view_mut::<2, 2>(2 * j, 2 * k)
                .copy_from(&(rotation(theta) * scale));
        }
    }
    Ok(s)
}

/// Ordered product of the gate matrices: the first layer acts first.
pub fn circuit_to_symplectic(circuit: &GaussianCircuit) -> DMatrix<f64> {
    let dim = 2 * circuit.width;
    let mut s = DMatrix::identity(dim, dim);
    for g in circuit.gates() {
        g.apply_left(&mut s);
    }
    s
}

fn log2_exact(n: usize) -> Option<u32> {
    (n > 0 && n.is_power_of_two()).then(|| n.trailing_zeros())
}

/// SWAP layers realising the perfect shuffle `2k -> k`, `2k+1 -> half+k` on
/// the listed physical modes.
///
/// The shuffle rotates the index bits right by one, which factors into the
/// adjacent bit transpositions `(1,0)`, then `(2,1)`, ... up to `(m, m-1)`.
/// Each transposition pairs up the indices whose two bits differ, giving a
/// layer of disjoint SWAPs.
fn shuffle_layers(modes: &[usize]) -> Vec<Vec<Gate>> {
    let bits = log2_exact(modes.len()).expect("power-of-two block");
    (0..bits.saturating_sub(1))
        .map(|i| {
            let (lo, hi) = (1usize << i, 1usize << (i + 1));
            (0..modes.len())
                .filter(|&x| x & lo != 0 && x & hi == 0)
                .map(|x| Gate::Swap {
                    a: modes[x],
                    b: modes[x ^ lo ^ hi],
                })
                .collect()
        })
        .collect()
}

/// Circuit for the perfect shuffle on `two_n` modes (`two_n >= 4`, a power
/// of two): `log2(two_n / 2)` layers of `two_n / 4` SWAPs.
pub fn compile_perfect_shuffle(two_n: usize) -> Result<GaussianCircuit> {
    match log2_exact(two_n) {
        Some(bits) if bits >= 2 => {}
        _ => {
            return invalid_arg(format!(
                "perfect shuffle needs a power of two >= 4 modes, got {two_n}"
            ))
        }
    }
    let modes: Vec<usize> = (0..two_n).collect();
    let mut circuit = GaussianCircuit::new(two_n)?;
    for layer in shuffle_layers(&modes) {
        circuit.push_layer(layer)?;
    }
    Ok(circuit)
}

/// Layers of the GFT on the listed physical modes (power-of-two count).
fn gft_layers(modes: &[usize]) -> Vec<Vec<Gate>> {
    let size = modes.len();
    if size == 1 {
        return Vec::new();
    }
    let half = size / 2;
    let mut layers = shuffle_layers(modes);

    let left = gft_layers(&modes[..half]);
    let right = gft_layers(&modes[half..]);
    debug_assert_eq!(left.len(), right.len());
    layers.extend(left.into_iter().zip(right).map(|(mut l, r)| {
        l.extend(r);
        l
    }));

    layers.push(
        (1..half)
            .map(|k| Gate::PhaseRotation {
                mode: modes[half + k],
                theta: PI * k as f64 / half as f64,
            })
            .collect(),
    );
    layers.push(
        (0..half)
            .map(|k| Gate::BeamSplitter {
                a: modes[k],
                b: modes[half + k],
                theta: FRAC_PI_4,
            })
            .collect(),
    );
    layers.push(
        (0..half)
            .map(|k| Gate::PhaseRotation {
                mode: modes[half + k],
                theta: PI,
            })
            .collect(),
    );
    layers
}

/// Compiles the `n`-mode GFT (`n` a power of two).
pub fn compile_gft(n: usize) -> Result<GaussianCircuit> {
    if log2_exact(n).is_none() {
        return invalid_arg(format!(
            "the GFT compiler needs a power-of-two mode count, got {n}; \
             use gft_symplectic for other sizes"
        ));
    }
    let modes: Vec<usize> = (0..n).collect();
    let mut circuit = GaussianCircuit::new(n)?;
    for layer in gft_layers(&modes) {
        circuit.push_layer(layer)?;
    }
    Ok(circuit)
}

/// State-preparation circuit for the correlated thermal state on `2N` modes:
/// system modes `0..N`, ancillas `N..2N`. One layer of `M` two-mode squeezers
/// with gain `(N/M) n_bar + 1` on `(k, N+k)`, then the GFT on the system.
pub fn prepare_correlated_circuit(spec: CorrelatedSpec) -> Result<GaussianCircuit> {
    let n = spec.n();
    if log2_exact(n).is_none() {
        return invalid_arg(format!(
            "state-preparation circuits need a power-of-two N, got {n}; \
             use states::correlated_thermal for other sizes"
        ));
    }
    let mut circuit = GaussianCircuit::new(2 * n)?;
    circuit.push_layer(
        (0..spec.m())
            .map(|k| Gate::TwoModeSqueeze {
                a: k,
                b: n + k,
                gain: spec.squeezer_gain(),
            })
            .collect(),
    )?;
    let system: Vec<usize> = (0..n).collect();
    for layer in gft_layers(&system) {
        circuit.push_layer(layer)?;
    }
    Ok(circuit)
}
