//! Built-in graph generators and the edge aliases they define.

use clap::{Args, ValueEnum};
use dimerlab::error::{Error, Result};
use dimerlab::graph::EmbeddedGraph;
use dimerlab::matrix::Matrix;
use dimerlab::scalar::{parse_rational, Rational};
use dimerlab::zoo::six_vertex::{six_vertex, Direction, SixVertexSpec};
use dimerlab::zoo::{
    dimerwt, four_cycle_identity, mixed_ex, q_fibonacci_grid, randomize_weights, snake_graph, DimerwtWeights,
    GridSpec,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Generator {
    Grid,
    SixVertex,
    Snake,
    Square,
    Mixed,
    Dimerwt,
    QFib,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    /// Built-in generator, used instead of a graph file.
    #[arg(long = "gen", value_enum)]
    pub generator: Option<Generator>,
    /// Grid length: the grid has N + 1 columns.
    #[arg(long = "N", default_value_t = 2)]
    pub big_n: usize,
    /// Uniform vertex multiplicity.
    #[arg(long = "n", default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub rows: usize,
    #[arg(long, default_value_t = 3)]
    pub cols: usize,
    /// Six-vertex angle as `cos,sin` rationals (e.g. `3/5,4/5`).
    #[arg(long, default_value = "3/5,4/5")]
    pub theta: String,
    /// Snake word over the letters N and E.
    #[arg(long, default_value = "NE")]
    pub word: String,
    /// Scalar q of the q-Fibonacci grid.
    #[arg(long, default_value = "2")]
    pub q: String,
    /// Replace all weights by random rationals drawn from this seed.
    #[arg(long)]
    pub random: Option<u64>,
}

impl GenArgs {
    fn theta(&self) -> Result<(Rational, Rational)> {
        let (c, s) = self
            .theta
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("--theta expects `cos,sin`, got `{}`", self.theta)))?;
        let (c, s) = (parse_rational(c.trim())?, parse_rational(s.trim())?);
        if c.clone() * &c + s.clone() * &s != Rational::from_integer(1.into()) {
            return Err(Error::Parse(format!("--theta: cos² + sin² != 1 for `{}`", self.theta)));
        }
        Ok((c, s))
    }

    fn six_vertex_spec(&self) -> Result<SixVertexSpec<Rational>> {
        let (cos, sin) = self.theta()?;
        Ok(SixVertexSpec {
            rows: self.rows,
            cols: self.cols,
            cos,
            sin,
        })
    }

    pub fn build(&self, kind: Generator) -> Result<EmbeddedGraph<Rational>> {
        let g = match kind {
            Generator::Grid => GridSpec::uniform(self.big_n, self.n).build()?,
            Generator::SixVertex => six_vertex(&self.six_vertex_spec()?)?,
            Generator::Snake => snake_graph(&self.word, self.n)?,
            Generator::Square => four_cycle_identity(self.n)?,
            Generator::Mixed => mixed_ex(Rational::from_integer(1.into()), Matrix::identity(2), Matrix::identity(3))?,
            Generator::Dimerwt => dimerwt(DimerwtWeights::identity())?,
            Generator::QFib => {
                let q = parse_rational(&self.q)?;
                q_fibonacci_grid(self.big_n, &Matrix::from_fn(1, 1, |_, _| q.clone()))?.0
            }
        };
        Ok(match self.random {
            Some(seed) => randomize_weights(&g, &mut ChaCha8Rng::seed_from_u64(seed)),
            None => g,
        })
    }

    /// Resolves `center-east` and friends on six-vertex lattices; other
    /// names pass through.
    pub fn resolve_edge(&self, name: &str) -> Result<String> {
        match (self.generator, name.strip_prefix("center-")) {
            (Some(Generator::SixVertex), Some(dir)) => {
                let d = Direction::parse(dir)
                    .ok_or_else(|| Error::Parse(format!("unknown direction `{dir}` in `{name}`")))?;
                self.six_vertex_spec()?.center_edge(d)
            }
            _ => Ok(name.to_string()),
        }
    }
}
