import hashlib
import os

from dotenv import load_dotenv
load_dotenv()

# Artifact layout
DEFAULT_RUNS_DIR = os.getenv('RIFF_RUNS_DIR', 'runs')
MODEL_FILENAME = 'model.json'
RULES_FILENAME = 'rules.json'
SELECTION_FILENAME = 'selection.json'
SELECTED_RULES_FILENAME = 'selected_rules.json'
REPORT_FILENAME = 'report.json'
MANIFEST_FILENAME = 'manifest.txt'
AGGREGATE_JSON_FILENAME = 'aggregate.json'
AGGREGATE_TEXT_FILENAME = 'aggregate.txt'
SPLIT_FILENAMES = {
    'train': 'train.csv',
    'validation': 'validation.csv',
    'test': 'test.csv',
    'induction': 'induction.csv',
    'selection': 'selection.csv',
}

# Document formats
MODEL_FORMAT = 'riff-model'
RULES_FORMAT = 'riff-rules'
SELECTION_FORMAT = 'riff-selection'
FORMAT_VERSION = 1
CONFIG_VERSION = '1.0'

# Tree growth
DEFAULT_MIN_LEAF = 5
DEFAULT_TAU = 0.5
GAIN_EPSILON = 1e-12

# Experiment protocol
DEFAULT_SPLIT_GRID = [10, 20, 30, 40, 50]
DEFAULT_SEEDS = [0, 1, 2, 3, 4]
DEFAULT_BUDGET_MAX = 0.01
DEFAULT_POSITIVE_RATE = 0.3
DEFAULT_SAMPLE_RATIO = 0.1
ROW_ID_COLUMN = 'row_id'
ORDER_KEY_COLUMN = 'order_key'


def derive_seed(master_seed: int, stage: str) -> int:
    """Derive a stage seed from (master seed, stage name) so stages rerun in isolation."""
    digest = hashlib.sha256(f"{master_seed}:{stage}".encode('utf-8')).digest()
    return int.from_bytes(digest[:4], 'big')
