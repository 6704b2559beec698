from docx.enum.text import WD_ALIGN_PARAGRAPH
from docx.shared import Pt, RGBColor

body_font = "Consolas"
heading_font = "Cambria"
text_color = RGBColor(20, 20, 20)
heading_color = RGBColor(31, 56, 100)
pass_color = (56, 118, 29)
warn_color = (255, 204, 0)
fail_color = (204, 51, 0)
link_color = RGBColor(68, 84, 196)

stylesheet = {
    "Title": {
        "font": heading_font,
        "size": Pt(24),
        "bold": True,
        "alignment": WD_ALIGN_PARAGRAPH.CENTER,
        "color": heading_color,
    },
    "Heading 1": {
        "font": heading_font,
        "size": Pt(18),
        "bold": True,
        "color": heading_color,
    },
    "Heading 2": {
        "font": heading_font,
        "size": Pt(14),
        "bold": True,
        "color": heading_color,
    },
    "Heading 3": {
        "font": heading_font,
        "size": Pt(12),
        "color": heading_color,
    },
    "Normal": {
        "font": body_font,
        "size": Pt(10),
        "color": text_color,
    },
    "List Bullet": {
        "font": body_font,
        "size": Pt(10),
        "color": text_color,
    },
    "Link": {
        "font": body_font,
        "size": Pt(10),
        "color": link_color,
    },
}
# excel table styles, used in turn
table_styles = [
    "Table Style Light 9",
    "Table Style Light 12",
    "Table Style Light 13",
]
