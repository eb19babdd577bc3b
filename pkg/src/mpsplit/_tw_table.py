"""Tracy-Widom (beta=1) quantiles. Generated by scripts/gen_tw_table.py; do not edit."""

TW1_TABLE = (
    (0.005, -4.147876502091),
    (0.010, -3.895432673064),
    (0.020, -3.614057143231),
    (0.030, -3.432376991846),
    (0.040, -3.294021243285),
    (0.050, -3.180379976938),
    (0.060, -3.082857465618),
    (0.070, -2.996734803162),
    (0.080, -2.919126420213),
    (0.090, -2.848131570640),
    (0.100, -2.782427905695),
    (0.110, -2.721056058577),
    (0.120, -2.663296454705),
    (0.130, -2.608594556170),
    (0.140, -2.556513280148),
    (0.150, -2.506701500431),
    (0.160, -2.458872498083),
    (0.170, -2.412788799955),
    (0.180, -2.368251250929),
    (0.190, -2.325090970249),
    (0.200, -2.283163320233),
    (0.210, -2.242343309078),
    (0.220, -2.202522034981),
    (0.230, -2.163603899150),
    (0.240, -2.125504395160),
    (0.250, -2.088148336215),
    (0.260, -2.051468419291),
    (0.270, -2.015404051324),
    (0.280, -1.979900381365),
    (0.290, -1.944907496117),
    (0.300, -1.910379746199),
    (0.310, -1.876275177837),
    (0.320, -1.842555050172),
    (0.330, -1.809183422566),
    (0.340, -1.776126799457),
    (0.350, -1.743353822784),
    (0.360, -1.710835003922),
    (0.370, -1.678542488528),
    (0.380, -1.646449848929),
    (0.390, -1.614531899571),
    (0.400, -1.582764531821),
    (0.410, -1.551124565008),
    (0.420, -1.519589611048),
    (0.430, -1.488137950413),
    (0.440, -1.456748417487),
    (0.450, -1.425400293625),
    (0.460, -1.394073206404),
    (0.470, -1.362747033739),
    (0.480, -1.331401811632),
    (0.490, -1.300017644440),
    (0.500, -1.268574616581),
    (0.510, -1.237052704674),
    (0.520, -1.205431689083),
    (0.530, -1.173691063875),
    (0.540, -1.141809944129),
    (0.550, -1.109766969528),
    (0.560, -1.077540203056),
    (0.570, -1.045107023534),
    (0.580, -1.012444010606),
    (0.590, -0.979526820604),
    (0.600, -0.946330051517),
    (0.610, -0.912827095039),
    (0.620, -0.878989973344),
    (0.630, -0.844789157847),
    (0.640, -0.810193366737),
    (0.650, -0.775169337465),
    (0.660, -0.739681569652),
    (0.670, -0.703692032956),
    (0.680, -0.667159833330),
    (0.690, -0.630040829663),
    (0.700, -0.592287191016),
    (0.710, -0.553846882394),
    (0.720, -0.514663064100),
    (0.730, -0.474673385960),
    (0.740, -0.433809152882),
    (0.750, -0.391994331818),
    (0.760, -0.349144361808),
    (0.770, -0.305164717522),
    (0.780, -0.259949161524),
    (0.790, -0.213377599669),
    (0.800, -0.165313425235),
    (0.810, -0.115600196875),
    (0.820, -0.064057437628),
    (0.830, -0.010475258227),
    (0.840, 0.045392616354),
    (0.850, 0.103838025947),
    (0.860, 0.165210659019),
    (0.870, 0.229934801157),
    (0.880, 0.298532660944),
    (0.890, 0.371657657760),
    (0.900, 0.450143289058),
    (0.910, 0.535077294012),
    (0.920, 0.627918763777),
    (0.930, 0.730692203422),
    (0.940, 0.846328981047),
    (0.950, 0.979316053470),
    (0.960, 1.137061299725),
    (0.970, 1.333213478349),
    (0.980, 1.597755674125),
    (0.990, 2.023449281380),
    (0.995, 2.422326585896),
)
