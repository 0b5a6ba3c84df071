"""
Labeled tabular data: CSV ingestion, train/validation/test splits and the
rebalanced induction and selection subsets.
"""

from riff.src.be.data.dataset import LabeledDataset, SplitMode, SplitSpec
from riff.src.be.data.loader import CategoricalPolicy, load_csv, load_split, write_split
from riff.src.be.data.sampling import SampleRatioMode, make_induction_selection, split_dataset, subsample

__all__ = [
    'LabeledDataset',
    'SplitMode',
    'SplitSpec',
    'CategoricalPolicy',
    'load_csv',
    'load_split',
    'write_split',
    'SampleRatioMode',
    'make_induction_selection',
    'split_dataset',
    'subsample',
]
