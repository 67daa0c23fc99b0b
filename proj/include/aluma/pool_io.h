#ifndef ALUMA_POOL_IO_H_
#define ALUMA_POOL_IO_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "aluma/pools.h"

namespace aluma {

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

struct LoadedPool {
  Pool pool;
  std::optional<std::vector<Label>> labels;
};

// Header f0,...,f{d-1}[,label]; values written with 17 significant digits.
void save_pool_csv(const Pool& pool, const std::vector<Label>* labels,
                   const std::string& path);
void save_pool_csv(const OraclePool& pool, const std::string& path);
LoadedPool load_pool_csv(const std::string& path);

// pool.csv -> pool.json
std::string sidecar_path(const std::string& csv_path);
void save_sidecar(const OraclePool& pool, const std::string& path);
GeneratorInfo load_sidecar(const std::string& path);

// Numeric matrix, no header.
RowMatrix load_matrix_csv(const std::string& path);
void save_matrix_csv(const RowMatrix& m, const std::string& path);

}  // namespace aluma

#endif  // ALUMA_POOL_IO_H_
