#include <cstdio>
#include <cmath>
#include "geoflow/shift.hpp"
using namespace geoflow; using namespace geoflow::shift;
int main(){
    setvbuf(stdout, nullptr, _IONBF, 0);
    printf("building group...\n");
    auto g = schottky::figure1_group();
    printf("group built\n");
    auto gs = models::make_group_shift(g);
    printf("tau_min=%.4f v2=%.4g\n", gs.tau_min, gs.v2_estimate);
    for (int b : {0,1}) {
      for (double M : {37.0, 5000.0, 20000.0, 1e8, 1e12}) {
        auto s = base_sums(gs, LinearForm::roof_multiple(2,-0.7), b, M);
        printf("b=%d M=%.1e W=%.12g T=%.12g\n", b, M, s.W, s.T);
      }
    }
    printf("verdict p @0.52: %d\n", (int)base_series_verdict(gs, LinearForm::roof_multiple(2,-0.52), 1));
    printf("verdict p @0.48: %d\n", (int)base_series_verdict(gs, LinearForm::roof_multiple(2,-0.48), 1));
    printf("trunc 1e280 @0.56: %.10g\n", truncated_pressure(gs, LinearForm::roof_multiple(2,-0.56), 1e280));
    return 0;
}
