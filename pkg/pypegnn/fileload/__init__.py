from .helpers import lower_dict_keys
from .helpers import check_required_keys
from .helpers import parse_key_value_lines
from .loadyaml import load_yaml_file
from .loadyaml import load_config_file
