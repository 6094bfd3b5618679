// Copyright The limabs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <mutex>

#include <fftw3.h>

#include "limabs/types.hpp"

namespace limabs::detail {

// 3D FFT of cell data (i fastest) embedded in a periodic box of pad * N cells
// per axis. Plans use FFTW_ESTIMATE so repeated runs are bit-identical.
class PaddedFFT {
 public:
  PaddedFFT(int n, double h, int pad) : n_(n), m_(pad * n), h_(h) {
    const std::size_t total = std::size_t(m_) * m_ * m_;
    buf_ = reinterpret_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total));
    std::lock_guard<std::mutex> lock(planner_mutex());
    fwd_ = fftw_plan_dft_3d(m_, m_, m_, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
    inv_ = fftw_plan_dft_3d(m_, m_, m_, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~PaddedFFT() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(inv_);
    fftw_free(buf_);
  }
  PaddedFFT(const PaddedFFT&) = delete;
  PaddedFFT& operator=(const PaddedFFT&) = delete;

  int n() const { return n_; }
  int m() const { return m_; }
  Id size() const { return Id(m_) * m_ * m_; }
  Id index(int i, int j, int k) const { return (Id(k) * m_ + j) * m_ + i; }

  // Wavenumber of padded index q along one axis.
  double wavenumber(int q) const {
    const int s = q < m_ / 2 ? q : q - m_;
    return 2.0 * kPi * s / (m_ * h_);
  }
  Vec3 wavevector(Id id) const {
    const int i = int(id % m_), j = int((id / m_) % m_), k = int(id / (Id(m_) * m_));
    return {wavenumber(i), wavenumber(j), wavenumber(k)};
  }
  // Symbol of the centred first difference, sin(k h) / h per axis.
  Vec3 central_symbol(Id id) const {
    const Vec3 kv = wavevector(id);
    return {std::sin(kv.x() * h_) / h_, std::sin(kv.y() * h_) / h_, std::sin(kv.z() * h_) / h_};
  }
  // Symbol of the 7-point Laplacian, -sum 4/h^2 sin^2(k h / 2).
  double laplacian_symbol(Id id) const {
    const Vec3 kv = wavevector(id);
    double s = 0.0;
    for (int d = 0; d < 3; ++d) {
      const double v = std::sin(0.5 * kv[d] * h_);
      s += v * v;
    }
    return -4.0 / (h_ * h_) * s;
  }

  CVec forward(const CVec& cells) const {
    for (Id q = 0; q < size(); ++q) buf_[q][0] = buf_[q][1] = 0.0;
    for (int k = 0; k < n_; ++k)
      for (int j = 0; j < n_; ++j)
        for (int i = 0; i < n_; ++i) {
          const cplx v = cells[(Id(k) * n_ + j) * n_ + i];
          buf_[index(i, j, k)][0] = v.real();
          buf_[index(i, j, k)][1] = v.imag();
        }
    fftw_execute(fwd_);
    CVec out(size());
    for (Id q = 0; q < size(); ++q) out[q] = {buf_[q][0], buf_[q][1]};
    return out;
  }

  // Full padded field in physical space (normalised inverse).
  CVec inverse_full(const CVec& spec) const {
    for (Id q = 0; q < size(); ++q) {
      buf_[q][0] = spec[q].real();
      buf_[q][1] = spec[q].imag();
    }
    fftw_execute(inv_);
    const double s = 1.0 / double(size());
    CVec out(size());
    for (Id q = 0; q < size(); ++q) out[q] = s * cplx(buf_[q][0], buf_[q][1]);
    return out;
  }

  CVec crop(const CVec& full) const {
    CVec out(Id(n_) * n_ * n_);
    for (int k = 0; k < n_; ++k)
      for (int j = 0; j < n_; ++j)
        for (int i = 0; i < n_; ++i) out[(Id(k) * n_ + j) * n_ + i] = full[index(i, j, k)];
    return out;
  }

  CVec inverse(const CVec& spec) const { return crop(inverse_full(spec)); }

 private:
  static std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
  }
  int n_, m_;
  double h_;
  fftw_complex* buf_ = nullptr;
  fftw_plan fwd_ = nullptr, inv_ = nullptr;
};

}  // namespace limabs::detail
