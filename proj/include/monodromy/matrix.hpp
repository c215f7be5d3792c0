#pragma once
// Small dense matrix over an exact ring.  The scalar type only needs ring
// operations (+, -, *), equality, and a default constructor producing zero;
// products skip zero left factors so the very sparse R-matrix slot
// embeddings stay cheap even at k^3 x k^3 sizes.

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace monodromy {

template <typename T>
class Mat {
 public:
  Mat() : rows_(0), cols_(0) {}
  Mat(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Mat identity(std::size_t n, const T& one) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  bool operator==(const Mat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  Mat operator+(const Mat& o) const {
    requireSameShape(o);
    Mat r(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i)
      r.data_[i] = data_[i] + o.data_[i];
    return r;
  }

  Mat operator-(const Mat& o) const {
    requireSameShape(o);
    Mat r(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i)
      r.data_[i] = data_[i] - o.data_[i];
    return r;
  }

  Mat operator-() const {
    Mat r(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = -data_[i];
    return r;
  }

  Mat operator*(const Mat& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix shape mismatch");
    Mat r(rows_, o.cols_);
    const T zero{};
    // One pass over the right factor records its nonzero columns per row, so
    // products of sparse operands cost time proportional to their structure.
    std::vector<std::vector<std::size_t>> nz(o.rows_);
    for (std::size_t k = 0; k < o.rows_; ++k)
      for (std::size_t j = 0; j < o.cols_; ++j)
        if (!(o(k, j) == zero)) nz[k].push_back(j);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t k = 0; k < cols_; ++k) {
        const T& a = (*this)(i, k);
        if (a == zero) continue;
        for (std::size_t j : nz[k]) r(i, j) += a * o(k, j);
      }
    }
    return r;
  }

  /// Scales every entry from the left.
  Mat scaled(const T& s) const {
    Mat r(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = s * data_[i];
    return r;
  }

  Mat transpose() const {
    Mat r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  bool isZero() const {
    const T zero{};
    for (const auto& v : data_)
      if (!(v == zero)) return false;
    return true;
  }

  /// Entrywise image under a scalar map (e.g. classical specialization).
  template <typename F>
  auto map(F&& f) const {
    using U = decltype(f(data_[0]));
    Mat<U> r(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(i, j) = f((*this)(i, j));
    return r;
  }

 private:
  void requireSameShape(const Mat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument("matrix shape mismatch");
  }

  std::size_t rows_, cols_;
  std::vector<T> data_;
};

template <typename T>
Mat<T> kron(const Mat<T>& a, const Mat<T>& b) {
  Mat<T> r(a.rows() * b.rows(), a.cols() * b.cols());
  const T zero{};
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const T& av = a(i, j);
      if (av == zero) continue;
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q) {
          const T& bv = b(p, q);
          if (bv == zero) continue;
          r(i * b.rows() + p, j * b.cols() + q) = av * bv;
        }
    }
  return r;
}

}  // namespace monodromy
