"""Coefficient tables for the Hardy Z remainder evaluator.

Generated by tools/gen_rs_tables.py; do not edit by hand.
"""

# Taylor series about 1/2 of
# psi(p) = cos(2*pi*(p*p - p - 1/16)) / cos(2*pi*p),
# variable h = p - 1/2.
PSI_SERIES = (
    0.3826834323650898,
    0.0,
    1.7489618723100817,
    0.0,
    2.118025207685496,
    0.0,
    -0.8707216670511481,
    0.0,
    -3.4733112243465167,
    0.0,
    -1.6626947308999325,
    0.0,
    1.216731288919232,
    0.0,
    1.3014304161007977,
    0.0,
    0.03051102182736167,
    0.0,
    -0.3755803051545095,
    0.0,
    -0.1085784416564066,
    0.0,
    0.051832902999549624,
    0.0,
    0.029999480619902277,
    0.0,
    -0.0022759396706125644,
    0.0,
    -0.004382647416580339,
    0.0,
    -0.0004064230183729847,
    0.0,
    0.0004006097785422114,
    0.0,
    8.971057991388841e-05,
    0.0,
    -2.3025650027239108e-05,
    0.0,
    -9.380006601906792e-06,
    0.0,
    6.323514947609108e-07,
    0.0,
    6.551022819231502e-07,
    0.0,
    2.210523745552697e-08,
    0.0,
    -3.322316176445629e-08,
)

# Power series in h for correction orders 0..4 (closed-form
# combinations of psi derivatives), then fitted polynomials for
# orders 5 and 6.  All are evaluated by Horner on h in [-1/2, 1/2].
C_SERIES = (
    (
        0.3826834323650898,
        0.0,
        1.7489618723100817,
        0.0,
        2.118025207685496,
        0.0,
        -0.8707216670511481,
        0.0,
        -3.4733112243465167,
        0.0,
        -1.6626947308999325,
        0.0,
        1.216731288919232,
        0.0,
        1.3014304161007977,
        0.0,
        0.03051102182736167,
        0.0,
        -0.3755803051545095,
        0.0,
        -0.1085784416564066,
        0.0,
        0.051832902999549624,
        0.0,
        0.029999480619902277,
        0.0,
        -0.0022759396706125644,
        0.0,
        -0.004382647416580339,
        0.0,
        -0.0004064230183729847,
        0.0,
        0.0004006097785422114,
        0.0,
        8.971057991388841e-05,
        0.0,
        -2.3025650027239108e-05,
        0.0,
        -9.380006601906792e-06,
        0.0,
        6.323514947609108e-07,
        0.0,
        6.551022819231502e-07,
        0.0,
        2.210523745552697e-08,
        0.0,
        -3.322316176445629e-08,
    ),
    (
        0.0,
        -0.053650205256750697,
        0.0,
        0.11027818741081483,
        0.0,
        1.2317200154315227,
        0.0,
        1.2634964862799458,
        0.0,
        -1.695108997559503,
        0.0,
        -2.9998711967650102,
        0.0,
        -0.10819944959899208,
        0.0,
        1.9407662946212714,
        0.0,
        0.7838423561500687,
        0.0,
        -0.5054829667900366,
        0.0,
        -0.38450723496057976,
        0.0,
        0.03747264646531532,
        0.0,
        0.09092026610973176,
        0.0,
        0.01044923755006451,
        0.0,
        -0.012582979651583417,
        0.0,
        -0.003399503721151274,
        0.0,
        0.0010410950537714891,
        0.0,
        0.0005010949051118486,
        0.0,
        -3.956359669003182e-05,
        0.0,
        -4.7624592453571896e-05,
        0.0,
        -1.8539355338085133e-06,
        0.0,
        3.1936918080068973e-06,
        0.0,
        4.0907807608506065e-07,
        0.0,
        -1.5446624332576631e-07,
    ),
    (
        0.005188542830293168,
        0.0,
        0.0012378633552253898,
        0.0,
        -0.18137505725166997,
        0.0,
        0.14291492748532125,
        0.0,
        1.3303391766687565,
        0.0,
        0.3522472353403734,
        0.0,
        -2.421001595891951,
        0.0,
        -1.6760787022538108,
        0.0,
        1.3689416723328371,
        0.0,
        1.5539019430222982,
        0.0,
        -0.1722164273472998,
        0.0,
        -0.6359068055045431,
        0.0,
        -0.09911649873041208,
        0.0,
        0.14033480067387008,
        0.0,
        0.04782352019827292,
        0.0,
        -0.017356040641479782,
        0.0,
        -0.010225012534028593,
        0.0,
        0.0009274149159794888,
        0.0,
        0.0013572194372373386,
        0.0,
        6.41369012029388e-05,
        0.0,
        -0.0001230080569819663,
        0.0,
        -1.83135074047892e-05,
        0.0,
        7.821628604322627e-06,
        0.0,
        2.0087542484759946e-06,
        0.0,
        -3.3532765393185714e-07,
        0.0,
        -1.4616020917418232e-07,
    ),
    (
        0.0,
        -0.0026794321814389136,
        0.0,
        0.02995372109103515,
        0.0,
        -0.042570172541828696,
        0.0,
        -0.28997965779803886,
        0.0,
        0.4888831999235446,
        0.0,
        1.230855876395746,
        0.0,
        -0.8297560708527408,
        0.0,
        -2.249763536666567,
        0.0,
        0.07845139961005472,
        0.0,
        1.7467492800868893,
        0.0,
        0.45968080979749937,
        0.0,
        -0.6619353471039775,
        0.0,
        -0.31590441036173633,
        0.0,
        0.12844792545207495,
        0.0,
        0.10073382716626152,
        0.0,
        -0.009530183848825268,
        0.0,
        -0.019264421687514088,
        0.0,
        -0.001246463715876929,
        0.0,
        0.0024243969641103086,
        0.0,
        0.000437647697741857,
        0.0,
        -0.00020714032687001792,
        0.0,
        -6.274344504186516e-05,
        0.0,
        1.157534381459567e-05,
        0.0,
        5.88385492454038e-06,
        0.0,
        -3.124677400696241e-07,
        0.0,
        -4.024065775496849e-07,
        0.0,
        -1.1991107790261461e-08,
        0.0,
        2.096375416461361e-08,
        0.0,
        2.0203581874281733e-09,
        0.0,
        -8.439685296122538e-10,
        0.0,
        -1.3791471005550923e-10,
        0.0,
        4.6275193690591074e-11,
        0.0,
        4.303121536758558e-10,
        0.0,
        8.736807271276486e-09,
        0.0,
        1.7894810663093823e-07,
        0.0,
        3.640896370600468e-06,
        0.0,
        7.361592210056438e-05,
        0.0,
        0.0014796400659993255,
        0.0,
        0.029572570731118453,
        0.0,
        0.5878807669324393,
        0.0,
        11.626974200596537,
        0.0,
        228.83578200974557,
        0.0,
        4482.873441349232,
    ),
    (
        0.00046483389361763383,
        0.0,
        -0.004022642946136188,
        0.0,
        0.003847177051796127,
        0.0,
        0.06581175135809486,
        0.0,
        -0.19604124343694448,
        0.0,
        -0.20854053686358853,
        0.0,
        0.9507754185141751,
        0.0,
        0.5341535312914873,
        0.0,
        -1.67634944117634,
        0.0,
        -1.076747157875129,
        0.0,
        1.235339301656597,
        0.0,
        1.0257825340057276,
        0.0,
        -0.40124095793988546,
        0.0,
        -0.5036663995108304,
        0.0,
        0.03573487795502745,
        0.0,
        0.14431763086785418,
        0.0,
        0.01509152741790347,
        0.0,
        -0.026098874779194363,
        0.0,
        -0.006126628379519262,
        0.0,
        0.003077503129870841,
        0.0,
        0.0011562478934088753,
        0.0,
        -0.00022775966758472127,
        0.0,
        -0.00014189637118181445,
        0.0,
        7.4648603079556425e-06,
        0.0,
        1.2479701645402158e-05,
        0.0,
        4.863945182283162e-07,
        0.0,
        -8.210237455937504e-07,
        0.0,
        -9.22326842591191e-08,
        0.0,
        4.103450501171096e-08,
        0.0,
        7.637575819496545e-09,
        0.0,
        -2.8190532677697627e-09,
        0.0,
        -2.974268168536491e-08,
        0.0,
        -6.626083370333651e-07,
        0.0,
        -1.4843289094817933e-05,
        0.0,
        -0.00032944573892289617,
        0.0,
        -0.007248622066508671,
        0.0,
        -0.15817645239942837,
        0.0,
        -3.424715387259601,
        0.0,
        -73.59891724465811,
        0.0,
        -1570.5020105493559,
        0.0,
        -33286.68391102819,
        0.0,
        -700974.7365180369,
    ),
    (
        -6.751604372698696e-20,
        0.00022686811845393893,
        1.3408628623547375e-16,
        0.0011081246864338048,
        -2.383198574586467e-14,
        -0.01621857933621143,
        1.5819538276004692e-12,
        0.052765035434544395,
        -5.3050452938797226e-11,
        0.025708876058035453,
        1.0214112704688937e-09,
        -0.3805907888940007,
        -1.1983263775797476e-08,
        0.22541550813271324,
        8.697303347103895e-08,
        1.0331927182537952,
        -3.7731496947504345e-07,
        -0.5422665093118549,
        8.475109791300189e-07,
        -1.5854176360421424,
        -3.863530526210572e-07,
        0.5170674521870193,
        -1.6531919577741753e-06,
        0.8851356438360576,
        5.168700998501645e-07,
        0.2211482028196749,
        3.761524397927277e-06,
        -0.22908503335125507,
        1.6433063953016126e-06,
        -0.3026745571632582,
        -1.5739844938095397e-06,
        -0.21601527023376862,
        -2.77864701622504e-06,
        -0.11936061007891549,
        -2.355749271948891e-06,
        -0.05657569622124201,
        -1.4804369698972641e-06,
        -0.02413212502946381,
        -7.763132398366527e-07,
        -0.009521386040434687,
        -3.5903808238701507e-07,
        -0.0035368739678796513,
        -1.5122171398355972e-07,
    ),
    (
        3.369099840904043e-05,
        -6.640738306473715e-17,
        -0.0004873038815909728,
        2.191400748783802e-14,
        0.0034913057281402786,
        -2.440262646962449e-12,
        -0.01063629648496857,
        1.2436026887811353e-10,
        -0.007957840640997478,
        -3.4864463392207337e-09,
        0.12366874490608365,
        5.8976257448010156e-08,
        -0.18374112518050287,
        -6.297269956436729e-07,
        -0.3141724569827081,
        4.2915769206662616e-06,
        0.8168058522303473,
        -1.8186972471211812e-05,
        0.2270391956726385,
        4.3629373296238286e-05,
        -0.955545856233634,
        -4.198903144204542e-05,
        -0.4340727100160284,
        -2.3241608786933706e-05,
        0.3021826577826482,
        3.00106526132454e-05,
        0.5215761686679655,
        4.9219014704839205e-05,
        0.4114537188991946,
        4.023907235555731e-05,
        0.24097636419966625,
        2.4499264122603475e-05,
        0.11858293901089757,
        1.2492367826664026e-05,
        0.05186565835252222,
        5.640656987428264e-06,
        0.020814039793025797,
        2.329070511877888e-06,
        0.007820406615065818,
        8.978158804527602e-07,
        0.0027893228548532744,
        3.2773817581085844e-07,
        0.0009538394204924704,
    ),
)
