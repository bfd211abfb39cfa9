"""cryptomate: crypto-API misuse analysis for MiniJava-CF with in-editor feedback.

The pipeline detects typestate violations (wrong or missing lifecycle calls)
and argument misuses against a JSON rule pack, picks analysis strategies
adaptively under a time budget, and learns from developer false-positive
verdicts. Entry points: the `cryptomate` CLI and the stdio language server.
"""

from .analysis import Finding
from .feedback import FeedbackStore
from .notify import Notification
from .pipeline import AnalysisSession, DocumentAnalysis, analyze_source
from .rules import RuleSet, bundled_rules_dir, load_rules
from .scheduler import AnalysisConfig

__version__ = "0.1.0"

__all__ = [
    "AnalysisConfig",
    "AnalysisSession",
    "DocumentAnalysis",
    "FeedbackStore",
    "Finding",
    "Notification",
    "RuleSet",
    "__version__",
    "analyze_source",
    "bundled_rules_dir",
    "load_rules",
]
