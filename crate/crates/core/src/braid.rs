//! Braid words, the Artin action on the free group, and closure combinatorics.
//!
//! Conventions: `σᵢ` acts on the right by
//! `xᵢ ↦ xᵢ₊₁`, `xᵢ₊₁ ↦ xᵢ₊₁⁻¹ xᵢ xᵢ₊₁`, fixing every other generator.
//! A word `b₁ b₂ ⋯` acts by applying `b₁` first. With these conventions
//! `σ₁²` sends `x ↦ y⁻¹xy` and `y ↦ y⁻¹x⁻¹yxy`.

use std::fmt;

use crate::error::{Error, Result};
use crate::Sign;

/// Upper bound on the number of letters a parsed word may expand to.
pub const MAX_PARSED_LETTERS: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BraidLetter {
    /// 1-based generator index `i` of `σᵢ`.
    pub generator: usize,
    pub sign: Sign,
}

impl BraidLetter {
    pub fn new(generator: usize, sign: Sign) -> Self {
        BraidLetter { generator, sign }
    }

    pub fn inverse(self) -> Self {
        BraidLetter::new(self.generator, -self.sign)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<BraidLetter>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<BraidLetter>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::Index { index: 0, strands });
        }
        for l in &letters {
            if l.generator == 0 || l.generator >= strands {
                return Err(Error::Index { index: l.generator as u64, strands });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn identity(strands: usize) -> Self {
        BraidWord { strands: strands.max(1), letters: Vec::new() }
    }

    /// `σ₁^e` in `B₂`.
    pub fn sigma1_power(exponent: i64) -> Self {
        let sign = if exponent < 0 { Sign::Negative } else { Sign::Positive };
        let letters = (0..exponent.unsigned_abs()).map(|_| BraidLetter::new(1, sign)).collect();
        BraidWord { strands: 2, letters }
    }

    pub fn strand_count(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[BraidLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        let letters = self.letters.iter().rev().map(|l| l.inverse()).collect();
        BraidWord { strands: self.strands, letters }
    }

    /// Concatenation `self · other`. Both words must have the same strand count.
    pub fn concat(&self, other: &BraidWord) -> Result<Self> {
        if self.strands != other.strands {
            return Err(Error::LengthMismatch { expected: self.strands, found: other.strands });
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord { strands: self.strands, letters })
    }

    /// Moves the first `k` letters to the end.
    pub fn rotate(&self, k: usize) -> Self {
        let mut letters = self.letters.clone();
        if !letters.is_empty() {
            let k = k % letters.len();
            letters.rotate_left(k);
        }
        BraidWord { strands: self.strands, letters }
    }

    /// Exponent sum, i.e. the writhe of the closed braid diagram.
    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|l| i64::from(l.sign.to_i8())).sum()
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        let mut run = self.letters.iter().peekable();
        while let Some(l) = run.next() {
            let mut count = 1i64;
            while run.peek() == Some(&l) {
                run.next();
                count += 1;
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            let exp = count * i64::from(l.sign.to_i8());
            if exp == 1 {
                write!(f, "s{}", l.generator)?;
            } else {
                write!(f, "s{}^{}", l.generator, exp)?;
            }
        }
        Ok(())
    }
}

/// Parses `term (space* term)*` with `term := "s" index ("^" signed_int)?`.
pub fn parse_braid(text: &str, strands: usize) -> Result<BraidWord> {
    Parser { bytes: text.as_bytes(), pos: 0 }.word(strands)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn word(&mut self, strands: usize) -> Result<BraidWord> {
        if strands == 0 {
            return Err(Error::Index { index: 0, strands });
        }
        let mut letters = Vec::new();
        self.skip_space();
        if self.at_end() {
            return Err(self.error("empty braid word"));
        }
        while !self.at_end() {
            let (index, exponent) = self.term()?;
            if index == 0 || index >= strands as u64 {
                return Err(Error::Index { index, strands });
            }
            let count = exponent.unsigned_abs();
            if letters.len() as u64 + count > MAX_PARSED_LETTERS as u64 {
                return Err(self.error("braid word too long"));
            }
            let sign = if exponent < 0 { Sign::Negative } else { Sign::Positive };
            letters.extend((0..count).map(|_| BraidLetter::new(index as usize, sign)));
            self.skip_space();
        }
        BraidWord::new(strands, letters)
    }

    fn term(&mut self) -> Result<(u64, i64)> {
        if self.peek() != Some(b's') {
            return Err(self.error("expected 's'"));
        }
        self.pos += 1;
        let index = self.positive_decimal()?;
        let mut exponent = 1i64;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let negative = self.peek() == Some(b'-');
            if negative {
                self.pos += 1;
            }
            let magnitude = self.positive_decimal()?;
            let magnitude = i64::try_from(magnitude)
                .ok()
                .filter(|&m| m <= MAX_PARSED_LETTERS as i64)
                .ok_or_else(|| self.error("exponent too large"))?;
            exponent = if negative { -magnitude } else { magnitude };
        }
        Ok((index, exponent))
    }

    fn positive_decimal(&mut self) -> Result<u64> {
        let start = self.pos;
        let mut value: u64 = 0;
        while let Some(c @ b'0'..=b'9') = self.peek() {
            value = value.saturating_mul(10).saturating_add(u64::from(c - b'0'));
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected a decimal number"));
        }
        if value == 0 {
            return Err(Error::Syntax { position: start, message: "expected a positive number".into() });
        }
        Ok(value)
    }

    fn skip_space(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn at_end(&self) -> bool {
        self.pos >= self.bytes.len()
    }

    fn error(&self, message: &str) -> Error {
        Error::Syntax { position: self.pos, message: message.to_string() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FreeLetter {
    /// 1-based generator index of `xᵢ`.
    pub generator: usize,
    pub sign: Sign,
}

impl FreeLetter {
    pub fn new(generator: usize, sign: Sign) -> Self {
        FreeLetter { generator, sign }
    }

    pub fn inverse(self) -> Self {
        FreeLetter::new(self.generator, -self.sign)
    }
}

/// A freely reduced word in the free group on `x₁, x₂, …`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FreeWord {
    letters: Vec<FreeLetter>,
}

impl FreeWord {
    pub fn identity() -> Self {
        FreeWord::default()
    }

    pub fn generator(generator: usize) -> Self {
        FreeWord { letters: vec![FreeLetter::new(generator, Sign::Positive)] }
    }

    pub fn from_letters<I: IntoIterator<Item = FreeLetter>>(letters: I) -> Self {
        let mut w = FreeWord::identity();
        for l in letters {
            w.push(l);
        }
        w
    }

    /// Reads a word written with exponents `±1`, e.g. `[(2, -1), (1, 1), (2, 1)]`.
    pub fn from_pairs(pairs: &[(usize, i8)]) -> Self {
        FreeWord::from_letters(pairs.iter().map(|&(g, e)| {
            FreeLetter::new(g, if e < 0 { Sign::Negative } else { Sign::Positive })
        }))
    }

    pub fn product_of_generators(n: usize) -> Self {
        FreeWord::from_letters((1..=n).map(|g| FreeLetter::new(g, Sign::Positive)))
    }

    pub fn letters(&self) -> &[FreeLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn max_generator(&self) -> usize {
        self.letters.iter().map(|l| l.generator).max().unwrap_or(0)
    }

    fn push(&mut self, l: FreeLetter) {
        if self.letters.last() == Some(&l.inverse()) {
            self.letters.pop();
        } else {
            self.letters.push(l);
        }
    }

    fn push_word(&mut self, w: &FreeWord, sign: Sign) {
        match sign {
            Sign::Positive => w.letters.iter().for_each(|&l| self.push(l)),
            Sign::Negative => w.letters.iter().rev().for_each(|&l| self.push(l.inverse())),
        }
    }

    pub fn inverse(&self) -> Self {
        FreeWord { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    pub fn concat(&self, other: &FreeWord) -> Self {
        let mut w = self.clone();
        w.push_word(other, Sign::Positive);
        w
    }

    /// Replaces each generator `xᵢ` by `images[i - 1]` and reduces.
    ///
    /// Panics if a generator has no image.
    pub fn substitute(&self, images: &[FreeWord]) -> Self {
        let mut w = FreeWord::identity();
        for l in &self.letters {
            w.push_word(&images[l.generator - 1], l.sign);
        }
        w
    }

    /// Renders the word with the given generator names, e.g. `y^-1 x y`.
    pub fn display_with(&self, names: &[&str]) -> String {
        if self.letters.is_empty() {
            return "1".to_string();
        }
        self.letters
            .iter()
            .map(|l| {
                let name = names
                    .get(l.generator - 1)
                    .map(|s| s.to_string())
                    .unwrap_or_else(|| format!("x{}", l.generator));
                match l.sign {
                    Sign::Positive => name,
                    Sign::Negative => format!("{name}^-1"),
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&[]))
    }
}

/// The automorphism `xᵢ ↦ xᵢ^σ` of the free group on `n` generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BraidAutomorphism {
    images: Vec<FreeWord>,
}

impl BraidAutomorphism {
    pub fn identity(n: usize) -> Self {
        BraidAutomorphism { images: (1..=n).map(FreeWord::generator).collect() }
    }

    pub fn from_images(images: Vec<FreeWord>) -> Self {
        BraidAutomorphism { images }
    }

    fn letter(n: usize, letter: BraidLetter) -> Self {
        let mut a = BraidAutomorphism::identity(n);
        let i = letter.generator;
        let (xi, xi1) = (FreeWord::generator(i), FreeWord::generator(i + 1));
        match letter.sign {
            Sign::Positive => {
                a.images[i - 1] = xi1.clone();
                a.images[i] = xi1.inverse().concat(&xi).concat(&xi1);
            }
            Sign::Negative => {
                a.images[i - 1] = xi.concat(&xi1).concat(&xi.inverse());
                a.images[i] = xi;
            }
        }
        a
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[FreeWord] {
        &self.images
    }

    pub fn image(&self, generator: usize) -> &FreeWord {
        &self.images[generator - 1]
    }

    /// `w^σ`.
    pub fn apply(&self, w: &FreeWord) -> FreeWord {
        w.substitute(&self.images)
    }

    /// The automorphism acting as `self` first and then `next`.
    pub fn then(&self, next: &BraidAutomorphism) -> BraidAutomorphism {
        BraidAutomorphism { images: self.images.iter().map(|w| next.apply(w)).collect() }
    }
}

/// The right action of `b` on the free group of rank `b.strand_count()`.
pub fn artin_action(b: &BraidWord) -> BraidAutomorphism {
    let n = b.strand_count();
    b.letters()
        .iter()
        .fold(BraidAutomorphism::identity(n), |acc, &l| acc.then(&BraidAutomorphism::letter(n, l)))
}

/// `end[p]`: the bottom position (0-based) reached by the strand starting at top position `p`.
fn strand_endpoints(b: &BraidWord) -> Vec<usize> {
    let n = b.strand_count();
    let mut at: Vec<usize> = (0..n).collect();
    for l in b.letters() {
        at.swap(l.generator - 1, l.generator);
    }
    let mut end = vec![0; n];
    for (pos, &strand) in at.iter().enumerate() {
        end[strand] = pos;
    }
    end
}

/// Components of the closed braid as sets of 1-based top positions, each
/// sorted, ordered by smallest element.
pub fn closure_components(b: &BraidWord) -> Vec<Vec<usize>> {
    let end = strand_endpoints(b);
    let mut seen = vec![false; end.len()];
    let mut components = Vec::new();
    for start in 0..end.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut p = start;
        while !seen[p] {
            seen[p] = true;
            cycle.push(p + 1);
            p = end[p];
        }
        cycle.sort_unstable();
        components.push(cycle);
    }
    components
}

/// Linking number of a 2-component closed braid: half the signed count of
/// crossings between strands of different components.
pub fn linking_number(b: &BraidWord) -> Result<i64> {
    let components = closure_components(b);
    if components.len() != 2 {
        return Err(Error::NotTwoComponents { components: components.len() });
    }
    let mut component_of = vec![0; b.strand_count()];
    for (c, members) in components.iter().enumerate() {
        for &p in members {
            component_of[p - 1] = c;
        }
    }
    let mut at: Vec<usize> = (0..b.strand_count()).collect();
    let mut total = 0i64;
    for l in b.letters() {
        let (left, right) = (at[l.generator - 1], at[l.generator]);
        if component_of[left] != component_of[right] {
            total += i64::from(l.sign.to_i8());
        }
        at.swap(l.generator - 1, l.generator);
    }
    debug_assert!(total % 2 == 0);
    Ok(total / 2)
}
