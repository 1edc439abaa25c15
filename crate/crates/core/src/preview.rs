//! Static SVG rendering of a layout view.

use std::fmt::Write as _;

use crate::layout::{KeyContent, Layout, ViewKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HintCorner {
    TopLeft,
    TopRight,
    BottomLeft,
    BottomRight,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("render style `{field}` must be positive")]
pub struct StyleError {
    pub field: &'static str,
}

/// Pixel dimensions for [`render_svg`]. All values are positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderStyle {
    key_width: u32,
    key_height: u32,
    corner_radius: u32,
    font_size: u32,
    gap: u32,
    hint_corner: HintCorner,
}

impl RenderStyle {
    pub fn new(
        key_width: u32,
        key_height: u32,
        corner_radius: u32,
        font_size: u32,
        gap: u32,
        hint_corner: HintCorner,
    ) -> Result<Self, StyleError> {
        for (field, v) in [
            ("key_width", key_width),
            ("key_height", key_height),
            ("corner_radius", corner_radius),
            ("font_size", font_size),
            ("gap", gap),
        ] {
            if v == 0 {
                return Err(StyleError { field });
            }
        }
        Ok(RenderStyle {
            key_width,
            key_height,
            corner_radius,
            font_size,
            gap,
            hint_corner,
        })
    }

    pub fn key_width(&self) -> u32 {
        self.key_width
    }

    pub fn key_height(&self) -> u32 {
        self.key_height
    }

    pub fn hint_corner(&self) -> HintCorner {
        self.hint_corner
    }

    fn hint_font_size(&self) -> u32 {
        (self.font_size * 11 / 20).max(1)
    }

    /// Canvas size for a grid of `rows` by `columns`.
    pub fn canvas_size(&self, rows: usize, columns: usize) -> (u32, u32) {
        let cols = columns as u32;
        let rows = rows as u32;
        (
            cols * self.key_width + (cols + 1) * self.gap,
            rows * self.key_height + (rows + 1) * self.gap,
        )
    }
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle {
            key_width: 36,
            key_height: 48,
            corner_radius: 5,
            font_size: 20,
            gap: 4,
            hint_corner: HintCorner::TopRight,
        }
    }
}

fn escape_text(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

/// Renders one view. Each non-empty slot becomes a rounded rectangle with a
/// centered label; a key with long-presses also gets its first one as a
/// small hint in the configured corner. Every label and hint is a `<text>`
/// element, so the text count is non-empty slots plus hinted keys.
pub fn render_svg(layout: &Layout, view: ViewKind, style: &RenderStyle) -> String {
    let v = layout.view(view);
    let (width, height) = style.canvas_size(v.row_count(), v.column_count());
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    );
    let _ = writeln!(
        out,
        "  <rect class=\"background\" x=\"0\" y=\"0\" width=\"{width}\" height=\"{height}\" fill=\"#eceff1\"/>"
    );

    let hint_size = style.hint_font_size();
    let inset = style.corner_radius.max(hint_size / 2) + 2;
    for (r, c, slot) in v.slots() {
        let label = match slot.content {
            KeyContent::Char(ch) => ch.to_string(),
            KeyContent::Special(s) => s.keyword().to_owned(),
            KeyContent::Empty => continue,
        };
        let x = style.gap + c as u32 * (style.key_width + style.gap);
        let y = style.gap + r as u32 * (style.key_height + style.gap);
        let _ = writeln!(
            out,
            "  <rect class=\"key\" x=\"{x}\" y=\"{y}\" width=\"{}\" height=\"{}\" rx=\"{r}\" ry=\"{r}\" fill=\"#ffffff\" stroke=\"#b0bec5\"/>",
            style.key_width,
            style.key_height,
            r = style.corner_radius
        );
        let font = match slot.content {
            KeyContent::Special(_) => hint_size,
            _ => style.font_size,
        };
        let _ = writeln!(
            out,
            "  <text class=\"label\" x=\"{}\" y=\"{}\" font-size=\"{font}\" text-anchor=\"middle\" dominant-baseline=\"central\">{}</text>",
            x + style.key_width / 2,
            y + style.key_height / 2,
            escape_text(&label)
        );
        if let Some(&hint) = slot.long_press.first() {
            let (hx, anchor) = match style.hint_corner {
                HintCorner::TopLeft | HintCorner::BottomLeft => {
                    (x + inset.min(style.key_width / 2), "start")
                }
                HintCorner::TopRight | HintCorner::BottomRight => {
                    (x + style.key_width - inset.min(style.key_width / 2), "end")
                }
            };
            let hy = match style.hint_corner {
                HintCorner::TopLeft | HintCorner::TopRight => y + inset.min(style.key_height / 2),
                HintCorner::BottomLeft | HintCorner::BottomRight => {
                    y + style.key_height - inset.min(style.key_height / 2)
                }
            };
            let _ = writeln!(
                out,
                "  <text class=\"hint\" x=\"{hx}\" y=\"{hy}\" font-size=\"{hint_size}\" text-anchor=\"{anchor}\" dominant-baseline=\"central\" fill=\"#607d8b\">{}</text>",
                escape_text(&hint.to_string())
            );
        }
    }
    out.push_str("</svg>\n");
    out
}
