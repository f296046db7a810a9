//! Size-range specifications like `base..base+10`, `6..15`, or `7`.
//!
//! `base` resolves per property, so the same flag value expands to
//! different node counts across a multi-property run.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    /// `base` or `base+k`.
    BaseOffset(usize),
    Absolute(usize),
}

impl Bound {
    pub fn resolve(&self, base: usize) -> usize {
        match self {
            Bound::BaseOffset(k) => base + k,
            Bound::Absolute(v) => *v,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeSpec {
    pub lo: Bound,
    pub hi: Bound,
}

impl SizeSpec {
    pub fn parse(text: &str) -> Result<SizeSpec, String> {
        let parse_bound = |s: &str| -> Result<Bound, String> {
            let s = s.trim();
            if let Some(rest) = s.strip_prefix("base") {
                if rest.is_empty() {
                    return Ok(Bound::BaseOffset(0));
                }
                let offset = rest
                    .strip_prefix('+')
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| format!("bad size bound `{s}`"))?;
                return Ok(Bound::BaseOffset(offset));
            }
            s.parse().map(Bound::Absolute).map_err(|_| format!("bad size bound `{s}`"))
        };
        match text.split_once("..") {
            Some((lo, hi)) => Ok(SizeSpec { lo: parse_bound(lo)?, hi: parse_bound(hi)? }),
            None => {
                let b = parse_bound(text)?;
                Ok(SizeSpec { lo: b, hi: b })
            }
        }
    }

    pub fn resolve(&self, base: usize) -> Result<Vec<usize>, String> {
        let lo = self.lo.resolve(base);
        let hi = self.hi.resolve(base);
        if lo > hi {
            return Err(format!("empty size range {lo}..{hi}"));
        }
        Ok((lo..=hi).collect())
    }
}
