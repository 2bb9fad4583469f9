// Copyright 2025 The tgq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TGQ_EMBEDDED_H
#define TGQ_EMBEDDED_H

#include <string>

namespace tgq::embedded {

// Contents of data/catalog.json and data/character_tables.txt at build time.
const std::string &catalog_json();
const std::string &character_tables();

}  // namespace tgq::embedded

#endif
