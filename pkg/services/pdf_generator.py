# pdf_generator.py
# Benchmark report PDF using reportlab

import math
from io import BytesIO
from datetime import datetime
from typing import Dict, List, Sequence, Tuple

from reportlab.lib.pagesizes import letter, landscape
from reportlab.lib.units import inch
from reportlab.lib import colors
from reportlab.lib.styles import getSampleStyleSheet, ParagraphStyle
from reportlab.platypus import SimpleDocTemplate, Paragraph, Spacer, Table, TableStyle
from reportlab.lib.enums import TA_LEFT, TA_CENTER

from core.models import BenchRow

# Metric rows of every scenario table, in display order
_METRICS = [
    ("|K - K^|", "mean_count_error"),
    ("d(C^ | C)", "median_d_est_given_true"),
    ("d(C | C^)", "median_d_true_given_est"),
    ("wall time (s)", "mean_wall_time"),
]


class BenchReportPDFGenerator:
    """Renders benchmark rows as one table per scenario"""

    def __init__(self):
        # Page dimensions
        self.page_width, self.page_height = landscape(letter)
        self.margin = 0.75 * inch

        # Colors
        self.header_color = colors.HexColor("#003366")
        self.text_color = colors.black
        self.light_gray = colors.HexColor("#F0F0F0")

        # Fonts and sizes
        self.title_font = "Helvetica-Bold"
        self.title_size = 16
        self.section_font = "Helvetica-Bold"
        self.section_size = 13
        self.body_font = "Helvetica"
        self.body_size = 10
        self.small_size = 8

        self.styles = getSampleStyleSheet()

        self.title_style = ParagraphStyle(
            'BenchTitle',
            parent=self.styles['Heading1'],
            fontName=self.title_font,
            fontSize=self.title_size,
            textColor=self.header_color,
            alignment=TA_CENTER,
            spaceAfter=12
        )

        self.section_style = ParagraphStyle(
            'BenchSection',
            parent=self.styles['Heading2'],
            fontName=self.section_font,
            fontSize=self.section_size,
            textColor=self.header_color,
            spaceAfter=6,
            spaceBefore=12
        )

        self.body_style = ParagraphStyle(
            'BenchBody',
            parent=self.styles['BodyText'],
            fontName=self.body_font,
            fontSize=self.body_size,
            textColor=self.text_color,
            alignment=TA_LEFT,
            leading=12
        )

        self.cell_style = ParagraphStyle(
            'BenchCell',
            parent=self.body_style,
            alignment=TA_CENTER
        )

    def generate_bench_pdf(self, rows: Sequence[BenchRow], manifest: Dict) -> bytes:
        """
        Generate the benchmark report

        Args:
            rows: aggregated benchmark cells
            manifest: run manifest; its config is summarised above the tables

        Returns:
            PDF file as bytes
        """
        buffer = BytesIO()
        doc = SimpleDocTemplate(
            buffer,
            pagesize=landscape(letter),
            rightMargin=self.margin,
            leftMargin=self.margin,
            topMargin=self.margin + 0.3 * inch,
            bottomMargin=self.margin
        )

        story = [Paragraph("CHANGE-POINT BENCHMARK", self.title_style)]
        story.extend(self._add_config_section(manifest))

        for scenario in sorted({row.scenario for row in rows}):
            story.append(Spacer(1, 0.2 * inch))
            story.extend(self._add_scenario_table(scenario, [r for r in rows if r.scenario == scenario]))

        doc.build(story, onFirstPage=self._add_header_footer, onLaterPages=self._add_header_footer)

        pdf_bytes = buffer.getvalue()
        buffer.close()
        return pdf_bytes

    def _add_config_section(self, manifest: Dict) -> list:
        elements = [Paragraph("CONFIGURATION", self.section_style)]
        cfg = manifest.get("config", {})
        data = [[key, str(cfg[key])] for key in sorted(cfg)]
        data.append(["version", str(manifest.get("version", ""))])

        table = Table(data, colWidths=[2.2 * inch, 6.5 * inch])
        table.setStyle(TableStyle([
            ('BACKGROUND', (0, 0), (0, -1), self.light_gray),
            ('FONTNAME', (0, 0), (0, -1), self.section_font),
            ('FONTNAME', (1, 0), (-1, -1), self.body_font),
            ('FONTSIZE', (0, 0), (-1, -1), self.small_size),
            ('PADDING', (0, 0), (-1, -1), 3),
            ('GRID', (0, 0), (-1, -1), 0.5, colors.gray),
        ]))
        elements.append(table)
        return elements

    def _add_scenario_table(self, scenario: int, rows: List[BenchRow]) -> list:
        """Metrics down the side, one column per (T, p) setting"""
        elements = [Paragraph(f"Scenario {scenario}", self.section_style)]
        settings: List[Tuple[int, int]] = sorted({(r.T, r.p) for r in rows})
        by_setting = {(r.T, r.p): r for r in rows}

        header = ["", "Method"] + [f"T = {T}, p = {p}" for T, p in settings]
        data = [header]
        for label, attr in _METRICS:
            cells = [Paragraph(label, self.cell_style), "MNP"]
            for setting in settings:
                cells.append(Paragraph(format_value(getattr(by_setting[setting], attr)), self.cell_style))
            data.append(cells)
        reps = sorted({r.reps for r in rows})
        data.append(["replicates", ""] + [str(by_setting[s].reps) for s in settings])

        width = (self.page_width - 2 * self.margin - 2.4 * inch) / max(len(settings), 1)
        table = Table(data, colWidths=[1.4 * inch, 1.0 * inch] + [width] * len(settings))
        table.setStyle(TableStyle([
            ('BACKGROUND', (0, 0), (-1, 0), self.header_color),
            ('TEXTCOLOR', (0, 0), (-1, 0), colors.white),
            ('FONTNAME', (0, 0), (-1, 0), self.section_font),
            ('BACKGROUND', (0, 1), (0, -1), self.light_gray),
            ('FONTNAME', (1, 1), (-1, -1), self.body_font),
            ('FONTSIZE', (0, 0), (-1, -1), self.body_size),
            ('ALIGN', (1, 0), (-1, -1), 'CENTER'),
            ('PADDING', (0, 0), (-1, -1), 5),
            ('GRID', (0, 0), (-1, -1), 0.5, colors.gray),
            ('VALIGN', (0, 0), (-1, -1), 'MIDDLE'),
        ]))
        elements.append(table)
        if len(reps) == 1:
            elements.append(Paragraph(
                f"Count error averaged and distances are medians over {reps[0]} replicate(s).",
                self.body_style))
        return elements

    def _add_header_footer(self, canvas, doc):
        """Add header and footer to each page"""
        canvas.saveState()

        canvas.setFont(self.title_font, 10)
        canvas.setFillColor(self.header_color)
        canvas.drawString(self.margin, self.page_height - 0.5 * inch, "CHANGE-POINT BENCHMARK")

        canvas.setFont(self.body_font, 9)
        canvas.setFillColor(colors.gray)
        generation_date = datetime.now().strftime("%B %d, %Y")
        canvas.drawRightString(self.page_width - self.margin, self.page_height - 0.5 * inch,
                               f"Generated: {generation_date}")

        canvas.setStrokeColor(self.header_color)
        canvas.setLineWidth(1)
        canvas.line(self.margin, self.page_height - 0.6 * inch,
                    self.page_width - self.margin, self.page_height - 0.6 * inch)

        canvas.setFont(self.body_font, self.small_size)
        canvas.drawCentredString(self.page_width / 2, 0.5 * inch, f"Page {doc.page}")

        canvas.restoreState()


def format_value(value) -> str:
    """Paragraph markup for a table cell; infinities use the Symbol font glyph"""
    if value is None:
        return "n/a"
    value = float(value)
    if math.isinf(value):
        sign = "" if value > 0 else "-"
        return f'{sign}<font name="Symbol">&#8734;</font>'
    if value.is_integer():
        return f"{value:.1f}"
    return f"{value:.3g}"
