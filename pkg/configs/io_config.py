# configs/io_config.py

SCHEMA_VERSION = 1

# Supported file extensions for each artifact kind
SUPPORTED_EXTENSIONS = {
    'series': {
        'read': ['.csv'],
        'write': ['.csv']
    },
    'report': {
        'read': ['.json'],
        'write': ['.json']
    },
    'config': {
        'read': ['.yaml', '.yml', '.cfg'],
        'write': ['.yaml']
    }
}

# Fixed column order of the observable time series
SERIES_COLUMNS = [
    't',
    'photon_number',
    'theta',
    'bunching',
    'defect_ratio',
    'defect_ratio_2d',
    'loc_z',
    'loc_x',
    'psv_z',
    'psv_x',
    'kin_T_z',
    'kin_T_x',
]

OUTPUT_LAYOUT = {
    'manifest': 'manifest.json',
    'runs_dir': 'runs',
    'run_stem': 'run_{index:05d}',
    'summary': 'summary.csv',
}
