import os

test_dir = os.path.abspath(os.path.dirname(__file__))
acceptance_enabled = os.environ.get('PYPEGNN_ACCEPTANCE', '0') == '1'
