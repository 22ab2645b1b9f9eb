// Copyright 2026 The swipht-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Measured device calibration in absolute units (V). Rows are mappings
// 1..7, columns gg, ge, eg, ee.
// Keep in sync with data/readout_calibration.json (a test compares them).

#include "swipht/readout.hpp"

namespace swipht {

const ReadoutCalibration& ReadoutCalibration::device() {
  static const ReadoutCalibration cal = [] {
    ReadoutCalibration c;
    c.K << 0.00121, 0.0785, 0.00529, 0.438,
           0.00509, 0.57, 0.014, 0.858,
           0.0122, 0.22, 0.454, 0.919,
           0.0209, 0.905, 0.0884, 0.943,
           0.0828, 0.745, 0.893, 0.986,
           0.149, 0.972, 0.734, 0.995,
           0.61, 0.99, 0.973, 0.999;
    c.V_low << 0.00474, 0.00558, 0.00491, 0.00511,
               0.00438, 0.00548, 0.00488, 0.0055,
               0.00439, 0.00516, 0.00629, 0.00482,
               0.00391, 0.00467, 0.00467, 0.00467,
               0.00422, 0.00556, 0.00516, 0.00422,
               0.00405, 0.00405, 0.00604, 0.00405,
               0.0045, 0.0045, 0.0045, 0.0045;
    c.V_high << 0.213, 0.213, 0.213, 0.213,
                0.219, 0.219, 0.219, 0.221,
                0.221, 0.221, 0.218, 0.226,
                0.227, 0.227, 0.227, 0.227,
                0.226, 0.228, 0.229, 0.231,
                0.227, 0.233, 0.229, 0.233,
                0.231, 0.234, 0.233, 0.235;
    c.sigma_low << 0.0337, 0.0339, 0.0347, 0.0399,
                   0.0285, 0.0283, 0.029, 0.0336,
                   0.0247, 0.0247, 0.029, 0.028,
                   0.0279, 0.0322, 0.0465, 0.0645,
                   0.0211, 0.0214, 0.0229, 0.0211,
                   0.0208, 0.0208, 0.0266, 0.0208,
                   0.0189, 0.0189, 0.0189, 0.0189;
    c.sigma_high << 0.0405, 0.0405, 0.0405, 0.0405,
                    0.0296, 0.0296, 0.0296, 0.033,
                    0.0248, 0.0248, 0.0313, 0.0287,
                    0.0313, 0.0313, 0.0656, 0.0549,
                    0.0221, 0.0219, 0.0232, 0.0255,
                    0.0217, 0.0244, 0.0271, 0.0444,
                    0.0192, 0.0213, 0.022, 0.0398;
    c.bias_dbm = {-75.4, -73.9, -72.7, -72.4, -71.3, -70.5, -69.5};
    c.map_table = {{{"", "e->f", ""},
                    {"", "e->f", ""},
                    {"e->f", "", ""},
                    {"", "e->f", "f->h"},
                    {"e->f", "", ""},
                    {"", "e->f", "f->h"},
                    {"", "e->f", "f->h"}}};
    c.validate();
    return c;
  }();
  return cal;
}

}  // namespace swipht
