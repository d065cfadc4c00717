"""Tests for services.pdf_generator."""

import math

from core.models import BenchRow
from services.pdf_generator import BenchReportPDFGenerator, format_value


def _rows():
    return [
        BenchRow(scenario=1, T=150, p=10, reps=3, mean_count_error=0.0,
                 median_d_est_given_true=1.0, median_d_true_given_est=1.0, mean_wall_time=0.8),
        BenchRow(scenario=1, T=300, p=10, reps=3, mean_count_error=0.3333,
                 median_d_est_given_true=math.inf, median_d_true_given_est=-math.inf,
                 mean_wall_time=2.5),
        BenchRow(scenario=3, T=150, p=10, reps=3, mean_count_error=1.0,
                 median_d_est_given_true=12.0, median_d_true_given_est=4.0, mean_wall_time=0.9,
                 discrepancy_rate=0.0),
    ]


def test_report_is_a_pdf():
    manifest = {"config": {"M": 50, "alpha": 0.0005, "N": 200}, "version": "0.1.0"}
    pdf = BenchReportPDFGenerator().generate_bench_pdf(_rows(), manifest)
    assert pdf.startswith(b"%PDF")
    assert len(pdf) > 1000


def test_report_without_rows():
    pdf = BenchReportPDFGenerator().generate_bench_pdf([], {"config": {}})
    assert pdf.startswith(b"%PDF")


class TestFormatValue:

    def test_integers_keep_one_decimal(self):
        assert format_value(3) == "3.0"

    def test_fractions(self):
        assert format_value(0.33333) == "0.333"

    def test_infinities(self):
        assert format_value(math.inf) == '<font name="Symbol">&#8734;</font>'
        assert format_value(-math.inf).startswith("-<font")

    def test_missing(self):
        assert format_value(None) == "n/a"
