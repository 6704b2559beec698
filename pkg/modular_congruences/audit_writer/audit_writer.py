import os
import re
from dataclasses import dataclass
from typing import Any

import docx
import polars as pl
import xlsxwriter
from docx import Document
from docx.enum.text import WD_ALIGN_PARAGRAPH
from docx.oxml import OxmlElement
from docx.oxml.ns import qn
from docx.shared import Mm, Pt, RGBColor
from docx.text.run import Run
from loguru import logger
from openpyxl.utils import get_column_letter

from modular_congruences.audit_writer.stylesheet import (
    fail_color,
    pass_color,
    stylesheet,
    table_styles,
    warn_color,
)
from modular_congruences.utils.report import VerificationReport

# excel caps worksheet names at 31 characters
SHEET_NAME_LIMIT = 31


@dataclass
class Heading:
    text: str
    style: str


def excel_name(text: str) -> str:
    """Excel table and sheet names allow word characters only."""
    return re.sub(r"\W", "_", text)[:SHEET_NAME_LIMIT]


class AuditWriter:
    """
    Word narrative plus Excel workbook for a verification run.

    Every report added lands in the workbook as a table of its records, with a
    linked summary line in the document. Failing families are counted and listed
    in a breakdown at the top of the document when the audit is committed.

    Attributes:
    - directory (str): Where the .docx and .xlsx files are written.
    - filename (str): Stem shared by both files.
    - document (Document): The Word document being built.
    - failures (int): Families with at least one failed check.
    - warnings (int): Low severity notes raised.
    - info (dict): Key/value pairs shown in the breakdown.
    """

    def __init__(
        self,
        directory: str,
        filename: str,
        document_title: str,
        include_excel: bool = True,
        include_logger: bool = True,
    ):
        self.directory = directory
        self.filename = filename
        self.document = Document()
        section = self.document.sections[0]
        section.page_height = Mm(297)
        section.page_width = Mm(210)

        self.stylesheet = stylesheet
        self.__style()

        para = self.document.add_heading(f"Audit {document_title}", 0)
        self.add_paragraph_border(para, ["bottom"])
        para = self.document.add_paragraph("Checks", style="Heading 1")
        self.add_paragraph_border(para, ["bottom"])

        self.failures = 0
        self.warnings = 0
        self.info: dict[str, Any] = {}
        self.tables_written = 0

        self.__include_excel = include_excel
        if include_excel:
            self.wb = xlsxwriter.Workbook(
                os.path.join(self.directory, f"{self.filename}.xlsx")
            )
            self.current_worksheet: str | None = None
            self.worksheets: dict[str, int] = {}

        self.__logger = logger if include_logger else StubObject()

    def __style(self):
        for style_name, style_attributes in self.stylesheet.items():
            if style_name in self.document.styles:
                style = self.document.styles[style_name]
            else:
                style = self.document.styles.add_style(
                    style_name, docx.enum.style.WD_STYLE_TYPE.PARAGRAPH
                )
            font = style.font
            if style_name == "Title" or "Heading" in style_name:
                style.element.rPr.rFonts.set(
                    qn("w:asciiTheme"), style_attributes.get("font", "Cambria")
                )
            else:
                font.name = style_attributes.get("font", "Consolas")
            font.size = style_attributes.get("size", Pt(10))
            font.bold = style_attributes.get("bold", False)
            font.color.rgb = style_attributes.get("color", RGBColor(0, 0, 0))
            style.paragraph_format.alignment = style_attributes.get(
                "alignment", WD_ALIGN_PARAGRAPH.LEFT
            )

    def add_hyperlink(self, paragraph, url: str, text: str):
        part = paragraph.part
        r_id = part.relate_to(
            url, docx.opc.constants.RELATIONSHIP_TYPE.HYPERLINK, is_external=True
        )
        hyperlink = OxmlElement("w:hyperlink")
        hyperlink.set(qn("r:id"), r_id)

        new_run = OxmlElement("w:r")
        new_run.append(OxmlElement("w:rPr"))
        new_run.text = text.replace("_", " ")
        hyperlink.append(new_run)

        run = paragraph.add_run()
        run._r.append(hyperlink)
        run.font.color.rgb = self.stylesheet["Link"]["color"]
        run.font.underline = True
        return hyperlink

    def add_important(self, text: str, severity: bool):
        """
        Flag a line in the document.

        Parameters:
        - text (str): The line to flag.
        - severity (bool): True for a failure, False for a warning.
        """
        paragraph = self.document.add_paragraph()
        run = paragraph.add_run("⚠ ")
        self.__format_run(run, Pt(14), fail_color if severity else warn_color)
        paragraph.add_run(text)
        if severity:
            self.failures += 1
            self.__logger.critical(text)
        else:
            self.warnings += 1
            self.__logger.warning(text)

    def add_info(self, key: str, value: str | tuple[str, str]):
        if isinstance(value, tuple):
            self.info.setdefault(key, {})[value[0]] = value[1]
        else:
            self.info[key] = value
        self.__logger.info(f"{key} : {value}")

    def add_text(self, text: str, style: str | None = None, indent_level: int = 0):
        if indent_level > 0:
            para = self.document.add_paragraph(text, style="List Bullet")
            para.paragraph_format.left_indent = Mm(6 * indent_level)
        else:
            para = self.document.add_paragraph(text)
        if style:
            para.style = style
        self.__logger.debug(text)

    def add_table(
        self, text: str, table: pl.DataFrame, table_name: str, indent_level: int = 0
    ):
        """
        Write ``table`` into the current worksheet and link to it from the document.
        Does nothing when the workbook is disabled.
        """
        if not self.__include_excel:
            return
        if self.current_worksheet is None:
            self.set_ws("Reports")
        table_name = excel_name(table_name.strip())
        column = self.worksheets[self.current_worksheet]
        anchor = f"{get_column_letter(column + 1)}4"

        para = self.document.add_paragraph(f"{text} → ")
        if indent_level > 0:
            para.paragraph_format.left_indent = Mm(6 * indent_level)
        self.add_hyperlink(
            para,
            f"{self.filename}.xlsx#{self.current_worksheet}!{anchor}",
            table_name,
        )

        table.write_excel(
            workbook=self.wb,
            worksheet=self.current_worksheet,
            table_name=table_name,
            table_style=table_styles[self.tables_written % len(table_styles)],
            position=(3, column),
            include_header=True,
        )
        name_format = self.wb.add_format({"bold": True, "font_size": 16})
        self.wb.get_worksheet_by_name(self.current_worksheet).write(
            f"{get_column_letter(column + 1)}2",
            table_name.replace("_", " "),
            name_format,
        )
        self.worksheets[self.current_worksheet] += len(table.columns) + 1
        self.tables_written += 1
        self.__logger.debug(
            f"{table_name} written to {self.current_worksheet}!{anchor}"
        )

    def add_report(self, report: VerificationReport):
        """Summary line, a table of every record and a flag for failing families."""
        summary = report.summary
        self.set_ws(excel_name(report.family))
        paragraph = self.document.add_paragraph()
        run = paragraph.add_run("● ")
        self.__format_run(run, Pt(12), pass_color if report.passed else fail_color)
        paragraph.add_run(
            f"{report.family}: {summary['pass']} pass, {summary['fail']} fail"
        )
        self.add_table(
            text=", ".join(f"{k}={v}" for k, v in report.params.items()),
            table=report.to_frame(),
            # excel rejects repeated table names and ones that read as cells
            table_name=f"{report.family}_{self.tables_written + 1}",
            indent_level=1,
        )
        if not report.passed:
            self.add_important(f"{report.family} has {summary['fail']} failures", True)
        truncated = sum("[truncated-term]" in r.desc for r in report.instances)
        if truncated:
            self.add_important(
                f"{report.family}: {truncated} checks read an index outside "
                "the sequence",
                False,
            )

    def add(self, element: Any, indent_level: int = 0):
        if isinstance(element, str):
            self.add_text(element, indent_level=indent_level)
        elif isinstance(element, list):
            for item in element:
                self.add(item, indent_level)
        elif isinstance(element, VerificationReport):
            self.add_report(element)
        elif isinstance(element, Heading):
            self.add_text(element.text, style=element.style, indent_level=indent_level)

    def add_top_breakdown(self):
        paragraph = self.document.paragraphs[1].insert_paragraph_before()
        run = paragraph.add_run("⚠")
        self.__format_run(run, Pt(14), warn_color)
        paragraph.add_run(f" {self.warnings} warnings raised\n")
        run = paragraph.add_run("⚠")
        self.__format_run(run, Pt(14), fail_color)
        paragraph.add_run(f" {self.failures} failing families\n")

        for key, value in self.info.items():
            if isinstance(value, dict):
                paragraph.add_run(f"{key}:\n")
                for name, detail in value.items():
                    paragraph.add_run(f"\t• {name}: {detail}\n")
            else:
                paragraph.add_run(f"{key}: {value}\n")
        paragraph.insert_paragraph_before("Breakdown", style="Heading 1")

    @staticmethod
    def __format_run(run: Run, font_size: Pt, color_rgb: tuple):
        run.font.size = font_size
        run.font.color.rgb = RGBColor(*color_rgb)

    @staticmethod
    def add_paragraph_border(paragraph, border_override: list[str] | None = None):
        p = paragraph._element
        pPr = p.find(qn("w:pPr"))
        if pPr is None:
            pPr = OxmlElement("w:pPr")
            p.insert(0, pPr)
        pBdr = OxmlElement("w:pBdr")
        for border_position in border_override or ["top", "bottom"]:
            border = OxmlElement(f"w:{border_position}")
            border.set(qn("w:val"), "single")
            border.set(qn("w:sz"), "10")
            border.set(qn("w:space"), "1")
            border.set(qn("w:color"), "000000")
            pBdr.append(border)
        pPr.append(pBdr)

    def commit_audit(self):
        """Add the breakdown, then close the workbook and save the document."""
        self.add_top_breakdown()
        if self.__include_excel:
            self.wb.close()
        self.document.save(os.path.join(self.directory, f"{self.filename}.docx"))

    def set_ws(self, worksheet_name: str):
        """Switch worksheet, creating it on first use."""
        if not self.__include_excel:
            return
        if worksheet_name not in self.worksheets:
            self.worksheets[worksheet_name] = 0
        self.current_worksheet = worksheet_name


class StubObject:
    """Swallows every call; stands in for the logger when logging is off."""

    def __getattr__(self, name):
        return self._stub_callable

    def _stub_callable(self, *args, **kwargs):
        return self
