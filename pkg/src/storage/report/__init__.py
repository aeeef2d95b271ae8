from storage.report.report_store import ReportStore, compare_reports, load_records, write_records

__all__ = ["ReportStore", "compare_reports", "load_records", "write_records"]
