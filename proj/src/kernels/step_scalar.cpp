#include "point_scalar.hpp"

namespace nullwave {

void step_kernel_scalar(const StepArgs& args, int k_begin, int k_end, double* plane_max) {
    for (int k = k_begin; k < k_end; ++k) {
        double m = 0.0;
        for (int j = 1; j <= args.n; ++j) {
            const std::size_t row = args.sz * static_cast<std::size_t>(k) + args.sy * static_cast<std::size_t>(j);
            for (int i = 1; i <= args.n; ++i) {
                const double v = detail::update_point_scalar(args, row + static_cast<std::size_t>(i));
                m = (m > v) ? m : v;
            }
        }
        plane_max[k - k_begin] = m;
    }
}

}  // namespace nullwave
